import subprocess
import sys

import pytest


def _zenoport(*args):
    """Drive the simulator CLI; the plots package consumes only its files."""
    cmd = [sys.executable, "-m", "zenoport.cli", *args, "--quiet"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")


@pytest.fixture(scope="session")
def runs_dir(tmp_path_factory):
    """Persisted outputs of the transfer, continuity, sweep, and mass runs."""
    out = tmp_path_factory.mktemp("runs")
    _zenoport("figure", "fig3", "--out", str(out))
    _zenoport("figure", "fig4", "--out", str(out))
    _zenoport("sweep", "--preset", "fig2", "--out", str(out))
    _zenoport("figure", "fig5b", "--out", str(out), "--set", "n_list=[32,64]")
    return out


@pytest.fixture(scope="session")
def fig3_main(runs_dir):
    return runs_dir / "fig3" / "main"


@pytest.fixture(scope="session")
def fig4_dirs(runs_dir):
    return (runs_dir / "fig4" / "control-N0", runs_dir / "fig4" / "zeno-N02048")
