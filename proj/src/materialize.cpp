#include "vbench/materialize.hpp"

#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "vbench/util.hpp"

namespace vbench::materialize {

namespace {

std::string quote_for_list(const std::string& path) {
    // concat-demuxer list entry; single quotes in paths are escaped ffmpeg-style
    std::string out = "file '";
    for (char c : path) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

std::string scale_filter(const RenderConfig& cfg) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "scale=%d:%d:force_original_aspect_ratio=decrease,"
                  "pad=%d:%d:(ow-iw)/2:(oh-ih)/2,fps=%g",
                  cfg.width, cfg.height, cfg.width, cfg.height, cfg.fps);
    return buf;
}

std::string format_ts(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    return buf;
}

}  // namespace

RunResult run_subprocess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw MaterializeError("empty argv");
    int err_pipe[2];
    if (pipe(err_pipe) != 0) throw MaterializeError("pipe() failed");

    const pid_t pid = fork();
    if (pid < 0) throw MaterializeError("fork() failed");
    if (pid == 0) {
        close(err_pipe[0]);
        dup2(err_pipe[1], STDERR_FILENO);
        close(err_pipe[1]);
        const int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0) dup2(devnull, STDOUT_FILENO);
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        std::fprintf(stderr, "exec failed: %s: %s\n", args[0], std::strerror(errno));
        _exit(127);
    }
    close(err_pipe[1]);
    std::string err;
    char buf[4096];
    ssize_t n;
    while ((n = read(err_pipe[0], buf, sizeof buf)) > 0) err.append(buf, static_cast<std::size_t>(n));
    close(err_pipe[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.err = std::move(err);
    return result;
}

std::string file_checksum(const std::filesystem::path& path) {
    return hex16(fnv1a64(read_text_file(path.string())));
}

RenderPlan plan_for(const TaskInstance& inst, const RenderConfig& cfg,
                    const std::filesystem::path& out_dir) {
    RenderPlan plan;
    plan.instance_id = inst.id;
    for (const Segment& s : inst.video.segments) {
        const std::string locator = s.uri.empty() ? s.clip_id : s.uri;
        std::filesystem::path p(locator);
        if (!cfg.clips_root.empty() && p.is_relative())
            p = std::filesystem::path(cfg.clips_root) / p;
        plan.clip_paths.push_back(p.string());
        plan.durations_s.push_back(s.duration_s);
    }
    plan.out_media = out_dir / (inst.id + ".mp4");
    return plan;
}

MaterializeResult materialize_video(const RenderPlan& plan, const RenderConfig& cfg) {
    if (plan.clip_paths.empty()) throw MaterializeError("render plan has no clips");
    for (const std::string& clip : plan.clip_paths)
        if (!std::filesystem::exists(clip))
            throw MaterializeError("missing clip asset: " + clip);
    std::filesystem::create_directories(plan.out_media.parent_path());

    const std::filesystem::path list_path = plan.out_media.string() + ".concat.txt";
    std::string list;
    for (const std::string& clip : plan.clip_paths)
        list += quote_for_list(std::filesystem::absolute(clip).string()) + "\n";
    write_text_file(list_path.string(), list);

    const std::vector<std::string> argv = {
        cfg.muxer, "-nostdin", "-y", "-f", "concat", "-safe", "0",
        "-i", list_path.string(), "-vf", scale_filter(cfg), "-an",
        plan.out_media.string()};
    const RunResult run = run_subprocess(argv);
    std::filesystem::remove(list_path);
    if (run.exit_code != 0)
        throw MaterializeError("muxer exited with code " + std::to_string(run.exit_code) + ": " +
                               run.err);

    MaterializeResult result;
    result.media_path = plan.out_media.string();
    result.checksum = file_checksum(plan.out_media);
    for (double d : plan.durations_s) result.duration_s += d;
    return result;
}

std::vector<double> plan_frame_times(double total_s, int count) {
    if (count <= 0) throw MaterializeError("frame count must be positive");
    if (total_s <= 0.0) throw MaterializeError("media duration must be positive");
    std::vector<double> times(static_cast<std::size_t>(count));
    const double step = total_s / count;
    for (int i = 0; i < count; ++i) times[static_cast<std::size_t>(i)] = (i + 0.5) * step;
    return times;
}

std::vector<double> plan_frame_times_per_segment(const std::vector<double>& segment_durations,
                                                 int count) {
    if (segment_durations.empty()) throw MaterializeError("no segments");
    const int n_seg = static_cast<int>(segment_durations.size());
    if (count < n_seg) throw MaterializeError("fewer frames than segments");
    const int base = count / n_seg;
    int remainder = count % n_seg;
    std::vector<double> times;
    double offset = 0.0;
    for (int s = 0; s < n_seg; ++s) {
        const int n = base + (s < remainder ? 1 : 0);
        for (double t : plan_frame_times(segment_durations[static_cast<std::size_t>(s)], n))
            times.push_back(offset + t);
        offset += segment_durations[static_cast<std::size_t>(s)];
    }
    return times;
}

std::vector<std::string> extract_frames(const std::string& media_path, const FramePolicy& policy,
                                        const std::vector<double>& segment_durations,
                                        const RenderConfig& cfg,
                                        const std::filesystem::path& out_dir) {
    if (!std::filesystem::exists(media_path))
        throw MaterializeError("media not readable: " + media_path);
    double total = 0.0;
    for (double d : segment_durations) total += d;
    const std::vector<double> times =
        policy.per_segment ? plan_frame_times_per_segment(segment_durations, policy.count)
                           : plan_frame_times(total, policy.count);
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> frames;
    for (std::size_t i = 0; i < times.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.jpg", i);
        const std::filesystem::path out = out_dir / name;
        const std::vector<std::string> argv = {cfg.muxer,        "-nostdin", "-y", "-ss",
                                               format_ts(times[i]), "-i",       media_path,
                                               "-frames:v",      "1",        "-q:v", "2",
                                               out.string()};
        const RunResult run = run_subprocess(argv);
        if (run.exit_code != 0)
            throw MaterializeError("frame extraction failed at t=" + format_ts(times[i]) + ": " +
                                   run.err);
        frames.push_back(out.string());
    }
    return frames;
}

}  // namespace vbench::materialize
