#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vbench/instance.hpp"

namespace vbench::materialize {

struct MaterializeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RenderConfig {
    std::string muxer = "ffmpeg";  // any ffmpeg-compatible CLI
    std::string clips_root;        // prefix for relative clip uris
    int width = 224;
    int height = 224;
    double fps = 8.0;
};

struct RenderPlan {
    std::string instance_id;
    std::vector<std::string> clip_paths;  // manifest event order
    std::vector<double> durations_s;
    std::filesystem::path out_media;
};

RenderPlan plan_for(const TaskInstance& inst, const RenderConfig& cfg,
                    const std::filesystem::path& out_dir);

struct MaterializeResult {
    std::string media_path;
    std::string checksum;  // fnv1a64 of the output bytes, hex
    double duration_s = 0.0;
};

// Hard-cut concatenation via the external muxer; stderr is captured into the
// error message on nonzero exit.
MaterializeResult materialize_video(const RenderPlan& plan, const RenderConfig& cfg);

struct FramePolicy {
    int count = 32;
    bool per_segment = false;
};

// Uniform midpoints over [0, total); 64 s / 32 frames -> 1, 3, ..., 63.
std::vector<double> plan_frame_times(double total_s, int count);
// Per-segment uniform midpoints on the concatenated timeline; the remainder
// of count/segments goes to the earliest segments.
std::vector<double> plan_frame_times_per_segment(const std::vector<double>& segment_durations,
                                                 int count);

std::vector<std::string> extract_frames(const std::string& media_path, const FramePolicy& policy,
                                        const std::vector<double>& segment_durations,
                                        const RenderConfig& cfg,
                                        const std::filesystem::path& out_dir);

struct RunResult {
    int exit_code = -1;
    std::string err;  // captured stderr
};

// fork/exec without a shell; argv[0] resolved via PATH.
RunResult run_subprocess(const std::vector<std::string>& argv);

std::string file_checksum(const std::filesystem::path& path);

}  // namespace vbench::materialize
