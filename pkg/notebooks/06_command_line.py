# %% [markdown]
# # Batch runs from the command line
#
# The same checks run through ``quasiyamabe``.  Here the entry point is
# called in-process; from a shell the arguments are identical.  Reports are
# JSON and the exit code is 0 on pass, 1 on a failed check, 2 on a usage
# error.

# %%
import json
import tempfile
from pathlib import Path

from quasiyamabe.cli import run

work = Path(tempfile.mkdtemp())

# %%
code, rep = run(["verify", "--catalog", "HALF_STEADY", "--suite", "soliton",
                 "--out", str(work / "half.json")])
print("exit", code, "|", rep["summary"])

# %%
csv_path = work / "warp4.csv"
code, rep = run(["construct", "--n", "4", "--m", "2", "--rho", "1", "--q", "0.5",
                 "--csv", str(csv_path), "--out", str(work / "construct.json")])
print("exit", code, "|", json.dumps(rep["instance"], indent=1))
print(csv_path.read_text().splitlines()[:3])

# %%
code, rep = run(["levelset", "--from-profile", str(csv_path), "--out", str(work / "levels.json")])
print("exit", code, "| checks", rep["summary"]["checks"], "| failed", rep["summary"]["failed"])

# %%
code, _ = run(["construct", "--n", "2", "--m", "1", "--rho", "0", "--q", "0"])
print("exit", code)
