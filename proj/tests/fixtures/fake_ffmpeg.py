#!/usr/bin/env python3
"""Minimal stand-in for the ffmpeg CLI contract the materializer uses.

Supports exactly two invocation shapes:
  concat:  fake_ffmpeg -nostdin -y -f concat -safe 0 -i LIST -vf ... -an OUT
  frame:   fake_ffmpeg -nostdin -y -ss T -i MEDIA -frames:v 1 -q:v 2 OUT

Clips are JSON files {"clip_id": ..., "duration_s": ...}. A "container" is the
JSON array of its clips in order; a "frame" is a JSON object recording which
segment the timestamp falls into. This keeps the orchestration, error and
checksum paths testable on machines without ffmpeg.
"""
import json
import sys


def fail(msg):
    sys.stderr.write(msg + "\n")
    sys.exit(1)


def main(argv):
    mode = None
    inputs = []
    ss = None
    out = None
    i = 0
    takes_value = {"-f", "-i", "-ss", "-vf", "-frames:v", "-q:v", "-safe"}
    while i < len(argv):
        arg = argv[i]
        if arg == "-f" and i + 1 < len(argv) and argv[i + 1] == "concat":
            mode = "concat"
            i += 2
        elif arg == "-i":
            inputs.append(argv[i + 1])
            i += 2
        elif arg == "-ss":
            ss = float(argv[i + 1])
            mode = mode or "frame"
            i += 2
        elif arg in takes_value:
            i += 2
        elif arg.startswith("-"):
            i += 1
        else:
            out = arg
            i += 1

    if not inputs or out is None:
        fail("fake_ffmpeg: missing input or output")

    if mode == "concat":
        segments = []
        try:
            with open(inputs[0]) as f:
                for line in f:
                    line = line.strip()
                    if not line.startswith("file '"):
                        continue
                    path = line[len("file '"):-1].replace("'\\''", "'")
                    with open(path) as clip_file:
                        clip = json.load(clip_file)
                    segments.append(clip)
        except FileNotFoundError as e:
            fail(f"fake_ffmpeg: {e}")
        with open(out, "w") as f:
            json.dump(segments, f, sort_keys=True)
        return 0

    if mode == "frame":
        try:
            with open(inputs[0]) as f:
                segments = json.load(f)
        except FileNotFoundError as e:
            fail(f"fake_ffmpeg: {e}")
        acc = 0.0
        chosen = segments[-1]
        index = len(segments) - 1
        for k, seg in enumerate(segments):
            acc += seg["duration_s"]
            if ss < acc:
                chosen = seg
                index = k
                break
        with open(out, "w") as f:
            json.dump({"t": ss, "segment_index": index, "clip_id": chosen["clip_id"]}, f,
                      sort_keys=True)
        return 0

    fail("fake_ffmpeg: unsupported invocation: " + " ".join(argv))


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
