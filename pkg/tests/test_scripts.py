import runpy
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).parents[1] / "scripts"


def load(name):
    return runpy.run_path(str(SCRIPTS / name))


def test_symbolic_order_three():
    mod = load("symbolic_cumulants.py")
    p = mod["symbolic_cumulant"](mod["SymbolicConfig"]("monotone", 3))
    assert p.coefficient(m2=1, m13=1) == F(-1, 2)
    assert p.coefficient(m1=1, m2=1, m3=1) == F(3, 2)


def test_sweep_runs(monkeypatch, capsys):
    mod = load("run_all_suites.py")
    monkeypatch.setattr(sys, "argv", ["run_all_suites.py", "--trials", "1", "--suites", "counts", "prop51"])
    with pytest.raises(SystemExit) as info:
        mod["main"]()
    assert info.value.code == 0
    assert capsys.readouterr().out.count("pass") == 2
