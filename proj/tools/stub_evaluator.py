#!/usr/bin/env python3
# Minimal JSON-lines evaluator: y = [-sum(x)] * m.
# usage: stub_evaluator.py [m] [ok|wrong-length|malformed|hang]
import json, sys, time

m = int(sys.argv[1]) if len(sys.argv) > 1 else 1
mode = sys.argv[2] if len(sys.argv) > 2 else "ok"
for line in sys.stdin:
    msg = json.loads(line)
    if msg["type"] == "hello":
        reply = {"type": "ready", "n_objectives": m}
    elif msg["type"] == "shutdown":
        sys.exit(0)
    elif mode == "hang":
        time.sleep(3600)
    elif mode == "malformed":
        print("result: oops", flush=True); continue
    else:
        reply = {"type": "result", "y": [-sum(msg["x"])] * (m + (mode == "wrong-length"))}
    print(json.dumps(reply), flush=True)
