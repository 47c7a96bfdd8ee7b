import pytest
from hypothesis import given, settings, strategies as st

from cayleytm.errors import MachineError, PointerClobber
from cayleytm.groups import grid, infinite_dihedral, integers
from cayleytm.machine import (OUT_OF_FUEL, STAY, MachineSpec, PointerTrail, initial_configuration,
                              run, step, word_problem_walk)
from cayleytm.serialize import machine_from_dict, read_json
from conftest import FIXTURES, TEST_GRAPHS


def writer_machine():
    # delta(q0, b) = (q0, 1, +1) on Z
    return MachineSpec(states={"q0"}, tape_alphabet={"_", "1"}, blank="_", input_alphabet={"1"},
                       transitions={("q0", "_"): ("q0", "1", 1), ("q0", "1"): ("q0", "1", 1)},
                       start="q0", terminals=frozenset())


class TestStep:
    def test_write_and_move(self, z):
        spec = writer_machine()
        cfg = step(spec, z, initial_configuration(spec, z))
        assert cfg.head == (1,) and cfg.tape == {(0,): "1"} and cfg.steps == 1

    def test_stay(self, z):
        spec = MachineSpec({"q"}, {"_"}, "_", set(), {("q", "_"): ("q", "_", STAY)}, "q", frozenset())
        cfg = step(spec, z, initial_configuration(spec, z))
        assert cfg.head == (0,) and cfg.steps == 1 and cfg.tape == {}

    def test_dihedral_head_canonical(self, dihedral):
        spec = MachineSpec({"q"}, {"_"}, "_", set(), {("q", "_"): ("q", "_", 1)}, "q", frozenset())
        cfg = initial_configuration(spec, dihedral, head=(0,))
        assert step(spec, dihedral, cfg).head == (0, 1)

    def test_step_leaves_input_untouched(self, z):
        spec = writer_machine()
        cfg = initial_configuration(spec, z)
        step(spec, z, cfg)
        assert cfg.steps == 0 and cfg.tape == {}

    def test_terminal_state_cannot_step(self, z):
        spec = MachineSpec({"q", "h"}, {"_"}, "_", set(), {("q", "_"): ("h", "_", 1)}, "h",
                           frozenset({"h"}))
        with pytest.raises(MachineError):
            step(spec, z, initial_configuration(spec, z))

    def test_blank_write_deletes(self, z):
        spec = MachineSpec({"q"}, {"_", "1"}, "_", {"1"},
                           {("q", "_"): ("q", "_", 1), ("q", "1"): ("q", "_", 1)}, "q", frozenset())
        cfg = initial_configuration(spec, z, cells=[((), "1")])
        assert step(spec, z, cfg).tape == {}


class TestRun:
    def test_zero_fuel(self, z):
        spec = writer_machine()
        cfg = initial_configuration(spec, z)
        result = run(spec, z, cfg, 0)
        assert result.halt == OUT_OF_FUEL and result.trace == [] and result.config.steps == 0

    def test_successor_fixture(self, z):
        spec = machine_from_dict(read_json(FIXTURES / "succ_z.json"), z)
        cfg = initial_configuration(spec, z, cells=[((1,) * k, "1") for k in (1, 2, 3)])
        result = run(spec, z, cfg, 100)
        assert str(result.halt) == "Terminal(accept)"
        assert result.config.tape == {(k,): "1" for k in (1, 2, 3, 4)}

    def test_walk_right_out_of_fuel(self, z):
        spec = machine_from_dict(read_json(FIXTURES / "walk_z.json"), z)
        result = run(spec, z, initial_configuration(spec, z), 10)
        assert result.config.head == (10,) and result.halt == OUT_OF_FUEL
        assert len(result.trace) == 10

    def test_deterministic_and_support_bounded(self):
        g = grid()
        spec = MachineSpec({"a", "b"}, {"_", "x"}, "_", {"x"},
                           {("a", "_"): ("b", "x", 3), ("a", "x"): ("a", "_", 2),
                            ("b", "_"): ("a", "x", 2), ("b", "x"): ("b", "_", 1)}, "a", frozenset())
        cfg = initial_configuration(spec, g)
        first = run(spec, g, cfg, 300)
        second = run(spec, g, cfg, 300)
        assert first.trace == second.trace
        assert [r.step for r in first.trace] == list(range(300))
        assert len(first.config.tape) <= 300

    def test_negative_fuel(self, z):
        with pytest.raises(ValueError):
            run(writer_machine(), z, initial_configuration(writer_machine(), z), -1)


class TestMachineCheck:
    def test_partial_transition_function_rejected(self):
        spec = MachineSpec({"q"}, {"_", "1"}, "_", {"1"}, {("q", "_"): ("q", "1", 0)}, "q", frozenset())
        with pytest.raises(MachineError, match="not total"):
            spec.check(2)

    def test_blank_in_input(self):
        spec = MachineSpec({"q"}, {"_"}, "_", {"_"}, {("q", "_"): ("q", "_", 0)}, "q", frozenset())
        with pytest.raises(MachineError):
            spec.check(2)

    def test_bad_move(self):
        spec = MachineSpec({"q"}, {"_"}, "_", set(), {("q", "_"): ("q", "_", 7)}, "q", frozenset())
        with pytest.raises(MachineError):
            spec.check(2)


class TestWordProblemWalk:
    def test_examples(self, z, dihedral):
        assert word_problem_walk(z, (1, 1), (1, 1))
        assert word_problem_walk(z, (1, 0), ())
        assert not word_problem_walk(dihedral, (0, 1), (1, 0))

    def test_self_intersecting_walk_returns_home(self):
        g = grid()
        loop = (0, 1, 2, 3, 0, 1)  # revisits the origin and then the cell below it
        trail = PointerTrail(g, loop)
        assert trail.origin == g.identity
        assert trail.pointer_writes == len(loop)
        assert trail.arrives_marked((0, 1))

    def test_strict_mode_detects_clobber(self):
        with pytest.raises(PointerClobber):
            PointerTrail(grid(), (0, 1, 2, 3), strict=True)
        assert word_problem_walk(grid(), (0, 1), (1, 0), strict=True)

    @pytest.mark.parametrize("name", sorted(TEST_GRAPHS))
    def test_random_pairs_agree_with_oracle(self, name):
        graph = TEST_GRAPHS[name]()
        gen = st.lists(st.integers(0, graph.n_generators - 1), max_size=10).map(tuple)

        @settings(max_examples=200)
        @given(gen, gen)
        def check(u, v):
            assert word_problem_walk(graph, u, v) == bool(graph.words_equal(u, v))
        check()
