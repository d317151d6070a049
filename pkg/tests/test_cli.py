import csv
import io
import json
import math

import jsonschema
import pytest

from metaplectica import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


CELL = [{"free": {"d": 1}}, {"lens": {"f": 1}}, {"free": {"d": 1}}]


def test_trace_default_four_cells(capsys):
    code, out, _ = run(capsys, "trace")
    assert code == 0
    r = rows(out)
    assert list(r[0]) == ["index", "q", "p", "angle_accum"]
    assert (float(r[-1]["q"]), float(r[-1]["p"])) == (1.0, 0.0)
    assert float(r[-1]["angle_accum"]) == pytest.approx(2 * math.pi)


def test_trace_two_cells_and_identity(capsys, tmp_path):
    cfg = write(tmp_path, "two.json", {"system": {"elements": CELL, "repeat": 2}, "ray": {"q": 1, "p": 0}})
    r = rows(run(capsys, "trace", "--config", cfg)[1])
    assert (float(r[-1]["q"]), float(r[-1]["p"])) == (-1.0, 0.0)
    cfg = write(tmp_path, "id.json", {"system": {"elements": [{"free": {"d": 0}}]}, "ray": {"q": 2, "p": 3}})
    r = rows(run(capsys, "trace", "--config", cfg)[1])
    assert (float(r[-1]["q"]), float(r[-1]["p"])) == (2.0, 3.0)


def test_trace_bad_config_exit_2(capsys, tmp_path):
    cfg = write(tmp_path, "bad.json", {"system": {"elements": [{"lens": {"f": 0}}]}})
    code, _, err = run(capsys, "trace", "--config", cfg)
    assert code == 2 and "invalid" in err
    cfg = write(tmp_path, "bad2.json", {"system": {"elements": []}})
    assert run(capsys, "trace", "--config", cfg)[0] == 2
    (tmp_path / "broken.json").write_text("{")
    assert run(capsys, "trace", "--config", str(tmp_path / "broken.json"))[0] == 2


@pytest.mark.parametrize("repeat,expected", [(4, -1), (8, 1)])
def test_cover_loops(capsys, tmp_path, repeat, expected):
    cfg = write(tmp_path, "loop.json", {"system": {"elements": CELL, "repeat": repeat}})
    code, out, _ = run(capsys, "cover", "--config", cfg)
    data = json.loads(out)
    jsonschema.validate(data, cli.load_schema("cover_output"))
    assert code == 0 and data["holonomy"] == expected and data["loop_closed"]


def test_cover_identity_and_open_loop(capsys, tmp_path):
    cfg = write(tmp_path, "id.json", {"system": {"elements": [{"free": {"d": 0}}]}})
    code, out, _ = run(capsys, "cover", "--config", cfg)
    assert code == 0 and json.loads(out)["holonomy"] == 1
    cfg = write(tmp_path, "open.json", {"system": {"elements": CELL, "repeat": 3}})
    code, out, err = run(capsys, "cover", "--config", cfg)
    assert code == 3 and json.loads(out)["loop_closed"] is False and "not closed" in err


def test_cover_phase_m2(capsys):
    data = json.loads(run(capsys, "cover")[1])
    assert data["phase_m2"] == pytest.approx(-math.pi / 2, abs=1e-3)


def test_propagate_random_profile_seeded(capsys, tmp_path):
    cfg = write(tmp_path, "p.json", {"profile": {"kind": "random", "terms": 3}, "grid": {"N": 1024}})
    a = run(capsys, "propagate", "--config", cfg, "--seed", "4")[1]
    b = run(capsys, "propagate", "--config", cfg, "--seed", "4")[1]
    c = run(capsys, "propagate", "--config", cfg, "--seed", "5")[1]
    assert a == b and a != c
    assert rows(a)[0].keys() == {"x", "re_in", "im_in", "re_out", "im_out"}


def test_propagate_top_hat_fails(capsys, tmp_path):
    cfg = write(tmp_path, "p.json", {"profile": {"kind": "top_hat"}})
    code, _, err = run(capsys, "propagate", "--config", cfg)
    assert code == 1 and ("edge" in err or "Nyquist" in err)


def test_grid_n_warning(capsys, caplog):
    code, out, _ = run(capsys, "propagate", "--grid-n", "1000")
    assert code == 0
    assert "not a power of two" in caplog.text


def test_gouy_small_config(capsys, tmp_path):
    cfg = write(
        tmp_path,
        "g.json",
        {"grid": {"N": 16384, "x_min": -400, "x_max": 400}, "sweep": {"z_start": -20, "z_end": 20, "samples": 41}},
    )
    r = rows(run(capsys, "gouy", "--config", cfg)[1])
    assert list(r[0]) == ["z", "theta_numeric", "theta_analytic"]
    assert all(abs(float(x["theta_numeric"]) - float(x["theta_analytic"])) < 1e-6 for x in r)


@pytest.mark.slow
def test_gouy_default_sweep(capsys):
    r = rows(run(capsys, "gouy")[1])
    assert len(r) == 201
    total = float(r[-1]["theta_analytic"]) - float(r[0]["theta_analytic"])
    assert total == pytest.approx(math.pi / 2, abs=1e-3)


def test_fringe_default(capsys):
    code, out, _ = run(capsys, "fringe")
    r = rows(out)
    assert code == 0
    assert list(r[0]) == ["x", "intensity_before", "intensity_after", "shift_estimate"]
    assert float(r[0]["shift_estimate"]) == pytest.approx(0.25, rel=0.02)


def test_algebra_commands(capsys, tmp_path):
    assert run(capsys, "algebra", "[D,Q]")[1] == "1\n"
    assert run(capsys, "algebra", "a*ad", "--exact")[1] == "1 + ad*a\n"
    code, out, _ = run(capsys, "algebra", "Q", "--fock", "2")
    data = json.loads(out)
    jsonschema.validate(data, cli.load_schema("fock_output"))
    assert data["real"][2][1] == pytest.approx(math.sqrt(2))
    cfg = write(tmp_path, "a.json", {"algebra": {"expression": "E*D^2*Q^2*E"}})
    assert run(capsys, "algebra", "--config", cfg)[1] == "2*E\n"
    assert run(capsys, "algebra", "V*Q")[0] == 1
    assert run(capsys, "algebra")[0] == 2


def test_pauli_demo(capsys):
    code, out, _ = run(capsys, "pauli-demo")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    intensities = [float(line.split()[-1]) for line in lines[1:]]
    assert intensities == [4.0, 2.0, 0.0, 2.0, 4.0]


def test_outputs_bit_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "fringe", "--out", str(a))
    run(capsys, "fringe", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_float_format_roundtrip():
    for x in (math.pi, 1 / 3, 1e-300, -2.5e17):
        assert float(cli.fmt(x)) == x


def test_shipped_schemas_are_valid():
    for name in ("system", "trace", "cover", "propagate", "gouy", "fringe", "algebra", "pauli", "cover_output", "fock_output"):
        jsonschema.Draft202012Validator.check_schema(cli.load_schema(name))
