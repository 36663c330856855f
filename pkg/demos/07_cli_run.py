# %% [markdown]
# # Running a scenario through the command line entry point

# %%
import tempfile
from pathlib import Path

from spinframe.cli import main

config = """
[scenario]
kind = "spindown"
[body]
shape = "hoop"
radius_m = 0.05
n_rings = 1
n_per_ring = 16
[motion]
w1_rad_s = 100.0
w2_rad_s = 50.0
[gravity]
gz = -10.0
"""
with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp) / "spindown.toml"
    cfg.write_text(config)
    code = main(["--config", str(cfg), "--out", tmp])
    print("exit code", code)
    print((Path(tmp) / "trajectory.csv").read_text().splitlines()[:3])
