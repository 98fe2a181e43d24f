"""
STP files, metric closure and the command line
==============================================

Writes a sparse, non-metric graph to an STP file, shows that the solver
refuses it, repairs it with ``check --metricize`` and solves the result.
The same steps work from a shell with the ``ismt`` executable.
"""

import json
import tempfile
from pathlib import Path

from ismt.cli import main

SPARSE = """33D32945 STP File, STP Format Version 1.0
SECTION Comment
Name "ring"
END
SECTION Graph
Nodes 6
Edges 7
E 1 2 1
E 2 3 1
E 3 4 1
E 4 5 1
E 5 6 1
E 6 1 1
E 1 4 5
END
SECTION Terminals
Terminals 2
T 1
T 4
END
EOF
"""

work = Path(tempfile.mkdtemp())
src = work / "ring.stp"
src.write_text(SPARSE)

##############################################################################
# The graph is incomplete, so it is not a metric instance yet (exit code 1).

print("check exit code:", main(["check", str(src)]))

##############################################################################
# ``--metricize`` writes ring.metric.stp next to the input.

main(["check", str(src), "--metricize"])
fixed = work / "ring.metric.stp"
print(fixed.read_text())

##############################################################################
# Solve with the exact subroutine and attach the brute-force optimum.

report = work / "ring.json"
main(["solve", str(fixed), "--sub", "dw", "--exact", "--out", str(report)])
doc = json.loads(report.read_text())
print(json.dumps(doc["result"], indent=1))
print("oracle:", doc["oracle"])

##############################################################################
# A small benchmark over generated files.

bench = work / "bench"
bench.mkdir()
for seed in range(6):
    main(["gen", "--kind", "euclidean", "--n", "7", "--k", "2", "--seed", str(seed),
          "--out", str(bench / f"e{seed}.stp")])
main(["bench", "--dir", str(bench), "--exact", "--out", str(work / "results.csv")])
print((work / "results.csv").read_text())
