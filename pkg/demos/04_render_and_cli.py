# Heatmaps and the command line
# ==============================
#
# Write a cube to disk, arrange it through the CLI and render both layouts
# as plain PBM bitmaps (any image viewer opens them) and as SVG.
import pathlib
import tempfile

from mcacube.cli import main
from mcacube.cube import write_fact_table, write_schema
from mcacube.synthetic import planted_blocks

work = pathlib.Path(tempfile.mkdtemp(prefix="mcacube-"))
cube = planted_blocks((8, 12), n_blocks=2, seed=1, facts_per_cell=2)
write_fact_table(cube, work / "facts.csv")
write_schema(cube.schema, work / "schema.json")
inputs = ["--facts", str(work / "facts.csv"), "--schema", str(work / "schema.json")]

main(["arrange", *inputs, "--out", str(work / "arrangement.json")])
main(["render", *inputs, "--out", str(work / "before.pbm"), "--dims", "D1,D2", "--scale", "8"])
main(["render", *inputs, "--out", str(work / "after.pbm"), "--dims", "D1,D2", "--scale", "8",
      "--arrangement", str(work / "arrangement.json")])
main(["render", *inputs, "--out", str(work / "after.svg"), "--dims", "D1,D2", "--format", "svg",
      "--arrangement", str(work / "arrangement.json")])
main(["evaluate", *inputs, "--out", str(work / "report.json"),
      "--arrangement", str(work / "arrangement.json")])

print((work / "report.json").read_text())
for path in sorted(work.iterdir()):
    print(path.name, path.stat().st_size, "bytes")
