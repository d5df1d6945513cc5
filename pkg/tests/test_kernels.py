import os
import subprocess
import sys

import pytest

from czkcke import _kernels
from czkcke.group import DEMO, TOY


def test_numpy_kernel_toy():
    for e in range(TOY.q):
        assert _kernels.dlog_scan_numpy(2, pow(2, e, 23), 23, 11) == e
    assert _kernels.dlog_scan_numpy(2, 13, 23, 3) == -1
    assert _kernels.dlog_scan_numpy(2, 13, 23, 0) == -1


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
def test_backends_agree():
    targets = [DEMO.gexp(e) for e in (0, 1, 65535, 65536, 400_000, DEMO.q - 1)]
    for t in targets:
        a = _kernels.dlog_scan_numpy(DEMO.g, t, DEMO.p, DEMO.q)
        b = _kernels.dlog_scan_numba(DEMO.g, t, DEMO.p, DEMO.q)
        assert a == b and pow(DEMO.g, a, DEMO.p) == t
    assert _kernels.dlog_scan_numba(DEMO.g, DEMO.gexp(1000), DEMO.p, 1000) == -1


def test_env_flag_selects_numpy():
    env = dict(os.environ, CZKCKE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from czkcke import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
