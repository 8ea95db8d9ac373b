import subprocess
import sys
import tempfile

exe = sys.argv[1]

cases = [
    (["gibbs", "--levels", "0,1", "--beta", "1"], 0),
    (["--help"], 0),
    (["nope"], 2),
    ([], 2),
    (["gibbs", "--levels", "0,1", "--energy", "2"], 2),
    (["gibbs", "--levels", "0,1", "--beta", "x"], 2),
    (["gibbs", "--levels", "0,1"], 2),
    (["spectrum", "--box", "1,1", "--max-count", "3"], 2),
    (["spectrum", "--box", "1,1,1", "--max-energy", "2"], 2),
    (["spectrum", "--well", "/nonexistent.csv", "--step", "0.1"], 2),
    (["shape-trace", "--config", "/nonexistent.json"], 2),
    (["spin", "--gap", "-1"], 2),
    (["criteria", "--dims", "1"], 2),
]

bad = 0
with tempfile.TemporaryDirectory() as out:
    for args, want in cases:
        extra = ["--out", out] if args and not args[0].startswith("-") and args[0] != "nope" else []
        r = subprocess.run([exe, *args, *extra], capture_output=True, text=True)
        ok = r.returncode == want
        if want == 2 and ok and not r.stderr.strip():
            ok = False
        print(("ok   " if ok else "FAIL ") + str(r.returncode) + " " + " ".join(args))
        bad += not ok
sys.exit(1 if bad else 0)
