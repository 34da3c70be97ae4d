"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
from pathlib import Path

import msgspec
import pytest

from abexact._type_stuff import Report
from abexact.cli import encode_report, main, run
from abexact.dsl import parse
from abexact.errors import ShapeError, UnknownName, UsageError
from abexact.utils import Settings, digest

DEFS = """
functor K over Span field Q {
    dim c = 1; dim a = 1; dim b = 1;
    map p = [[1]];
    map q = [[1]];
}

functor F over Span field Q {
    dim c = 2; dim a = 1; dim b = 1;
    map p = [[1, 0]];
    map q = [[0, 1]];
}

functor G over Span field Q { dim c = 1; }

natmap i : K -> F {
    comp c = [[1], [1]];
    comp a = [[1]];
    comp b = [[1]];
}

natmap e : F -> G { comp c = [[1, -1]]; }

ses eta { mono: i; epi: e; }

category P = product(Discrete2, A2);
functor S1 over P field Q { dim 1|1 = 1; dim 2|1 = 1; }
functor T2 over A2 field Q { dim 2 = 1; }
functor T1 over A2 field Q { dim 1 = 1; }
"""


@pytest.fixture
def defs(tmp_path: Path) -> Path:
    path = tmp_path / "defs.abx"
    path.write_text(DEFS, encoding="utf-8")
    return path


@pytest.fixture
def quiet(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("ABEXACT_LOG_FILE", "0")
    for name in ("ABEXACT_SEED", "ABEXACT_BUDGET", "ABEXACT_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def test_decide_span_fails_with_the_worked_certificate():
    report = run(["decide-colim-exact", "--cat", "Span", "--field", "Q"])
    assert report.result == "fails"
    assert report.exit_code == 1
    assert report.certificate["f_eta"].is_zero()
    data = msgspec.json.decode(encode_report(report))
    assert data["certificate"]["z_dims"] == {"pt": 0}
    assert data["certificate"]["source"] == "pinned"


def test_decide_bc2_holds_over_q():
    report = run(["decide-colim-exact", "--cat", "BC2"])
    assert report.exit_code == 0
    assert report.label == "holds"


def test_lemma_colim_star_on_span():
    report = run(["verify", "--claim", "lemma-colim-star", "--cat", "Span", "--budget", "50", "--seed", "7"])
    assert report.exit_code == 0
    assert report.budget == 50
    assert report.seed == 7
    assert report.label == "holds (sampled, budget 50)"
    assert report.certificate["checked"] == 50
    assert report.certificate["isomorphisms"] == 50


def test_budget_and_seed_fall_back_to_settings():
    settings = Settings(seed=11, budget=3)
    report = run(["verify", "--claim", "lemma-colim-star", "--cat", "BC2", "--field", "F2"], settings=settings)
    assert report.seed == 11
    assert report.budget == 3


def test_discrete_corollaries_command():
    report = run(["verify", "--claim", "discrete-corollaries", "--cat", "Discrete1", "--sizes", "1,2", "--budget", "1"])
    assert report.exit_code == 0
    assert report.inputs["sizes"] == "1,2"


def test_colim_of_a_constant_functor(defs: Path):
    report = run(["colim", str(defs), "--functor", "K"])
    assert report.certificate["apex_dim"] == 1
    report = run(["lim", str(defs), "--functor", "F"])
    assert report.certificate["apex_dim"] == 2


def test_zeta_from_a_file(defs: Path):
    report = run(["zeta", str(defs), "--ses", "eta"])
    assert report.certificate["z_dims"] == {"pt": 0}
    assert not report.certificate["f_eta_mono"]
    assert report.certificate["colim_star_iso"]


def test_ext_between_simples(defs: Path):
    report = run(["ext", str(defs), "--functor", "T1", "--into", "T2"])
    assert report.certificate["dim"] == 1
    assert len(report.certificate["basis_cocycles"]) == 1


def test_psi_over_a_product(defs: Path):
    report = run(["psi", str(defs), "--functor", "S1", "--base", "A2", "--into", "T2", "--seed", "4"])
    m = report.certificate["map"]
    assert m.is_bijective
    assert report.inputs["delta"] == "A2"
    data = msgspec.json.decode(encode_report(report))
    assert data["certificate"]["map"]["domain_dim"] == 2


def test_psi_with_a_constant_target():
    ws = parse(DEFS)
    report = run(["psi", "--functor", "G", "--adim", "1"], ws)
    assert not report.certificate["map"].is_surjective


def test_wrong_base_is_rejected(defs: Path):
    with pytest.raises(ShapeError):
        run(["colim", str(defs), "--functor", "K", "--base", "A2"])


def test_usage_errors(defs: Path):
    with pytest.raises(UsageError):
        run(["verify", "--cat", "Span"])
    with pytest.raises(UsageError):
        run(["psi", str(defs), "--functor", "S1", "--into", "T2", "--adim", "1"])
    with pytest.raises(UsageError):
        run(["colim", str(defs.parent / "missing.abx"), "--functor", "K"])
    with pytest.raises(UsageError):
        run(["verify", "--claim", "discrete-corollaries", "--cat", "Point", "--sizes", "a,b"])
    with pytest.raises(UnknownName):
        run(["colim", str(defs), "--functor", "Nope"])


def test_reports_are_deterministic():
    first = encode_report(run(["decide-colim-exact", "--cat", "BC2", "--field", "F2"]))
    second = encode_report(run(["decide-colim-exact", "--cat", "BC2", "--field", "F2"]))
    assert first == second
    assert digest(first) == digest(second)


def test_rationals_are_written_as_strings():
    ws = parse("functor H over A2 field Q { dim 1 = 1; dim 2 = 1; map a = [[1/2]]; }")
    report = Report(command="colim", result="ok", label="ok", certificate={"apex": ws.functor("H")})
    data = msgspec.json.decode(encode_report(report))
    assert data["certificate"]["apex"]["maps"]["a"]["data"] == [["1/2"]]


@pytest.mark.usefixtures("quiet")
def test_main_writes_the_report(tmp_path: Path):
    out = tmp_path / "report.json"
    with pytest.raises(SystemExit) as info:
        main(["--no-log-file", "decide-colim-exact", "--cat", "Span", "--out", str(out)])
    assert info.value.code == 1
    data = msgspec.json.decode(out.read_bytes())
    assert data["result"] == "fails"
    assert data["schema"] == 1


@pytest.mark.usefixtures("quiet")
def test_main_reports_errors_with_exit_code_two(capsys: pytest.CaptureFixture[str]):
    with pytest.raises(SystemExit) as info:
        main(["decide-colim-exact", "--cat", "Nope"])
    assert info.value.code == 2
    assert "abexact: error:" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


@pytest.mark.usefixtures("quiet")
def test_main_restores_the_root_logger(tmp_path: Path):
    before = logging.getLogger().level
    with pytest.raises(SystemExit):
        main(["--log-level", "debug", "decide-colim-exact", "--cat", "Point", "--out", str(tmp_path / "r.json")])
    assert logging.getLogger().level == before


@pytest.mark.usefixtures("quiet")
def test_main_reports_an_unwritable_out_path(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "missing" / "r.json"
    with pytest.raises(SystemExit) as info:
        main(["--no-log-file", "decide-colim-exact", "--cat", "Span", "--out", str(out)])
    assert info.value.code == 2
    assert "cannot write report" in capsys.readouterr().err
    assert not out.exists()
