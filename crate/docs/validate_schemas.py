"""Validates CLI outputs against the schemas in cli-schemas.md.

Run from the repository root after `cargo build -p ramcycles-cli`.
Requires the `jsonschema` package.
"""
import json, re, subprocess, sys, jsonschema
md = open('docs/cli-schemas.md').read()
blocks = [json.loads(b) for b in re.findall(r"```json\n(.*?)```", md, re.S)]
defs = blocks[0]["$defs"]
names = ["jordan", "cycle", "vertices", "verify", "global_in", "global_out", "hilbert_in", "hilbert_out"]
schemas = {n: dict(b, **{"$defs": defs}) for n, b in zip(names, blocks[1:])}
B = "target/debug/ramcycles"
def run(args, inp):
    r = subprocess.run([B] + args, input=inp, capture_output=True, text=True)
    return r
H1 = '[[0, {"a": "0", "b": "1"}], [{"a": "0", "b": "-1"}, 0]]'
cases = [
 ("jordan", ["jordan","--p","3"], H1),
 ("jordan", ["jordan","--p","5","--epsilon","2"], '[[1,0,0],[0,"5",0],[0,0,"25"]]'),
 ("cycle", ["cycle","--p","3","--epsilon","-1"], "[[1]]"),
 ("cycle", ["cycle","--p","3"], '[[1, {"a": "1/3"}], [{"a": "1/3"}, 1]]'),
 ("vertices", ["vertices","--p","3","--raw","--dot"], H1),
 ("vertices", ["vertices","--p","5"], '{"matrix": [[1,0],[0,"5"]]}'),
 ("verify", ["verify","--p","3","--raw"], H1),
 ("hilbert_out", ["hilbert"], '{"a": "2/3", "b": -5, "place": 2}'),
]
for g in ["global_identity","global_diag_2_5","global_diag_1_3"]:
    inp = open(f"crates/core/tests/golden/{g}.input.json").read()
    jsonschema.validate(json.loads(inp), schemas["global_in"])
    cases.append(("global_out", ["global"], inp))
for name, args, inp in cases:
    r = run(args, inp)
    assert r.returncode == 0, (args, r.stderr)
    jsonschema.validate(json.loads(r.stdout), schemas[name])
for inp in [H1, '{"matrix": [[1]]}', '[["1/2", 3]]']:
    jsonschema.validate(json.loads(inp), defs["localRequest"] | {"$defs": defs})
jsonschema.validate({"a": 1, "b": "2", "place": "real"}, schemas["hilbert_in"])
errschema = {"$ref": "#/$defs/error", "$defs": defs}
for args, inp in [(["cycle","--p","2"],"[[1]]"), (["jordan","--p","3"],"[[1]"), (["cycle"],"[[1]]")]:
    r = run(args, inp)
    jsonschema.validate(json.loads(r.stderr), errschema)
print("all", len(cases), "outputs valid")
