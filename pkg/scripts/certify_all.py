#!/usr/bin/env python3
"""Emit every sign certificate plus the closed-form report into certs/."""

import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sparsehalves.certify import certify_sign, closed_form_checks, replay  # noqa: E402

OUT = ROOT / "certs"


def main():
    OUT.mkdir(exist_ok=True)
    all_ok = True
    for fid in ("g", "h", "k", "ell", "m"):
        t0 = time.perf_counter()
        cert = certify_sign(fid)
        emit = time.perf_counter() - t0
        path = OUT / f"{fid}.cert.json"
        cert.save(path)
        t0 = time.perf_counter()
        rep = replay(path)
        check = time.perf_counter() - t0
        all_ok &= cert.proved and rep["ok"]
        print(
            f"{fid:4s} {cert.sign:8s} margin={cert.margin} {cert.status:7s} "
            f"boxes={cert.stats['boxes']:6d} emit={emit:6.2f}s replay={check:5.2f}s "
            f"replay_ok={rep['ok']}"
        )
    report = closed_form_checks()
    (OUT / "closed_forms.json").write_text(json.dumps(report, indent=1))
    print("closed forms:", json.dumps(report))
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
