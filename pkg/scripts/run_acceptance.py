"""Run the acceptance suite and print one PASS/FAIL line per criterion."""

import re
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-s", "-p", "no:cacheprovider"],
        capture_output=True, text=True, cwd=ROOT,
    )
    # progress dots share lines with the printed reports
    lines = [m.group(0) for m in re.finditer(r"criterion \d+: (PASS|FAIL).*", proc.stdout)]
    print("\n".join(lines))
    passed = sum("PASS" in l for l in lines)
    print(f"{passed}/{len(lines)} criteria pass")
    return 0 if lines and passed == len(lines) else 1


if __name__ == "__main__":
    sys.exit(main())
