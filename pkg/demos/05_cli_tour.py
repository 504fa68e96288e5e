"""
The hml command line
====================

The same computations driven from JSON files. Each call prints the command,
its exit status and the table it wrote.
"""
import subprocess
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

COMMANDS = [
    "ext --algebra dual.json --m k.json --n k.json --max-degree 6",
    "tor --m k.json --n k.json --max-degree 3",
    "resolve --m k.json --kind injective --depth 3",
    "chi --m k.json --n k.json --max-degree 6",
    "check ses-triangle --load dual-bundle.json --f incl --g proj",
    "check adjunction --phi phi.json --m k.json --n point-k.json --max-degree 3",
    "check base-change --phi phi.json --phi-u phi.json --m point-k.json",
    "k3 chi --h2 rational-curves.json --v 0,(1,0),1 --w 0,(0,1),1",
    "k3 ns --load k3-small.json --h2 h2 --period sigma",
    "cohomology --complex malformed/bad-syntax.json",
]

for line in COMMANDS:
    out = subprocess.run([sys.executable, "-m", "hml.cli", *line.split()], cwd=FIXTURES,
                         capture_output=True, text=True)
    print(f"$ hml {line}\n[exit {out.returncode}]")
    print(out.stdout.rstrip() or out.stderr.rstrip())
    print()
