"""Smoke test for the Python extension module.

Builds the extension with cargo (unless HYPREAPER_LIB points at a built
library), loads it as ``hypreaper`` and checks a few known values.

    python3 python/smoke_test.py
"""

import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library() -> Path:
    override = os.environ.get("HYPREAPER_LIB")
    if override:
        return Path(override)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "hypreaper-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for name in ("libhypreaper.so", "libhypreaper.dylib", "hypreaper.dll"):
        candidate = target / "release" / name
        if candidate.exists():
            return candidate
    sys.exit("built library not found under " + str(target / "release"))


def load(lib: Path, workdir: str):
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy(lib, Path(workdir) / ("hypreaper" + suffix))
    sys.path.insert(0, workdir)
    import hypreaper

    return hypreaper


def close(a, b, tol):
    return abs(a - b) <= tol


def main() -> int:
    with tempfile.TemporaryDirectory() as workdir:
        hr = load(locate_library(), workdir)
        failures = []

        def check(name, ok):
            print(("ok   " if ok else "FAIL ") + name)
            if not ok:
                failures.append(name)

        check("rhs at apex", hr.rhs(2.0, 0.0) == (1.0, 0.0, -1.0))
        check("gamma curve", close(hr.gamma_curve(-math.pi / 4), 1.0, 1e-15))
        check("region tags", hr.classify_region(1.0, 0.5) == ("+", "-"))

        report = hr.trace_and_classify(2.0)
        check("bigraph", report.is_bigraph)
        check("forward asymptote", abs(report.forward_asymptote) < 2e-6)
        check("backward asymptote", abs(report.backward_asymptote - math.pi) < 2e-6)

        curve = hr.build_reaper(1.0)
        check("apex height", close(max(curve.z), 1.0, 1e-10))
        t = curve.turning_index
        check("vertical tangent", t is not None and close(curve.theta[t], math.pi / 2, 0.05))
        lo = curve.branch_state_at_x("lower", 0.5)
        up = curve.branch_state_at_x("upper", 0.5)
        check("branches ordered", up[2] > lo[2])

        mesh = hr.SurfaceMesh.parabolic(curve, -1.0, 1.0, 5)
        residual = mesh.soliton_residual(1.0, 3.0)
        check("soliton residual", residual.max_abs < 1e-8)
        check("mesh shape", mesh.shape == (len(curve), 5))

        oracle = math.gamma(0.75) * math.gamma(0.5) / (4 * math.gamma(1.25))
        check("half width", close(hr.half_width(1.0), oracle, 1e-12))
        minimal = hr.build_minimal_reaper(1.0)
        check("minimal span", close(minimal.x_span(), 2 * oracle, 5e-3))

        u = [[2.0] * 5 for _ in range(5)]
        check("graph residual", close(hr.graph_pde_residual(u, 1.0, 0.0, 0.1).max_abs, 1.0, 1e-14))

        try:
            hr.build_reaper(-1.0)
            check("rejects z0 <= 0", False)
        except ValueError:
            check("rejects z0 <= 0", True)

        params = hr.OdeParams(z_min=1e-2)
        check("params", hr.build_reaper(1.0, params=params).z[0] >= 1e-2 - 1e-12)

        return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
