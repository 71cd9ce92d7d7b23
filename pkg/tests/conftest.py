import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hcpadic import kernels
from hcpadic.model import ModelParams

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()


@pytest.fixture(scope="session")
def p3k2():
    return ModelParams.from_fugacity(3, 2, 13, 32)


@pytest.fixture(scope="session")
def p7k3():
    return ModelParams.from_fugacity(7, 3, 8, 32)


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("HCPADIC_PRECISION", None)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "hcpadic", *args], capture_output=True,
                          text=True, env=full_env, timeout=120)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
