"""Smoke test for the `adm` extension module.

Builds the extension with cargo if needed, loads it from the target
directory and exercises the main entry points.

    python3 python/smoke_test.py [--release]
"""

import importlib.util
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module(release):
    profile = "release" if release else "debug"
    cmd = ["cargo", "build", "-p", "adm-python"] + (["--release"] if release else [])
    subprocess.run(cmd, cwd=ROOT, check=True)
    built = ROOT / "target" / profile / "libadm.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = Path(tempfile.mkdtemp()) / ("adm" + suffix)
    shutil.copy(built, target)
    spec = importlib.util.spec_from_file_location("adm", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    adm = load_module("--release" in sys.argv)

    m = adm.Matcher("0.5", "0.3", 2)
    book = {s: m.encode(s) for s in ["00", "01", "10", "11"]}
    assert book == {"00": "001", "01": "100", "10": "110", "11": "11110"}, book
    assert m.decode("11110") == ("11", 4)

    c = adm.Matcher("0.3", "0.5", 2)
    assert c.decode("101")[0] == "11"

    cb = adm.enumerate_codebook("0.5", "0.3", 2)
    assert abs(cb.informational_divergence() - 1.6346) < 1e-4
    assert cb.expected_length() == 3.5
    assert abs(cb.coverage() - 0.34503) < 1e-12
    assert cb.is_prefix_free() and len(cb) == 4

    opt, kl = adm.optimal_codebook(2, "0.5", "0.3")
    assert sorted(opt.codewords()) == ["0", "10", "110", "111"]
    assert abs(kl - 0.074584) < 1e-6

    assert adm.entropy("0.5") == 1.0
    assert abs(adm.kl_upper_bound("0.3") - 2.2515) < 1e-4
    assert abs(adm.normalized_kl_bound("0.5", "0.3", 100) - 2.2515e-2) < 1e-6
    length, bound, ok = adm.compression_check("0.3", 2)
    assert ok and abs(length - 3.18) < 1e-12

    fixed = adm.Matcher("0.5", "0.3", 4000, backend="fixed")
    src = "".join("1" if (i * 7919) % 13 < 6 else "0" for i in range(4000))
    frame = fixed.encode_framed(src)
    assert frame[:4] == b"ADM1"
    assert fixed.decode_framed(frame) == (src, len(frame))
    assert adm.decode_frames(frame + frame) == src + src

    r = adm.monte_carlo("0.5", "0.3", 1000, 200, seed=1)
    assert r.kl_bits <= r.kl_upper and 0.8 < r.rate < 0.9
    assert repr(adm.monte_carlo("0.5", "0.3", 1000, 200, seed=1)) == repr(r)

    for bad in [lambda: adm.Matcher("1.0", "0.3", 2), lambda: m.encode("0"), lambda: m.decode("1")]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test passed:", r)


if __name__ == "__main__":
    main()
