"""Turing machines whose tapes are Cayley graphs of infinite groups.

The modules build on each other:

* :mod:`.groups` -- generator alphabets, word-problem backends, tape graphs
* :mod:`.machine` -- machines over a tape graph and the pointer-trail walk
* :mod:`.compiler` -- compile a standard one-tape machine onto any tape graph
* :mod:`.treeorder` -- super-reduced words and their lexicographic order
* :mod:`.words` -- subsequence counts and parity profiles
* :mod:`.algebra` -- truncated F2 free algebra and homogeneous ideals
* :mod:`.escape` -- escapes built from an element of infinite order
"""
from .errors import (BudgetExhausted, CayleyTMError, DimensionOverflow, EscapeError,
                     FiniteGroupError, InvalidAlphabet, LowDegreeResidue, MachineError,
                     NoPath, NotDecidable, PointerClobber)
from .groups import (FiniteTable, FinitelyPresented, FreeAbelian, FreeGroup, GeneratorAlphabet,
                     InfiniteDihedral, TapeGraph, WordVerdict, free_group, grid,
                     infinite_dihedral, integers, validate_tape_graph)
from .machine import (Configuration, MachineSpec, initial_configuration, run, step,
                      word_problem_walk)
from .compiler import StandardTM, bisimulate, compile_machine, transcribe_input, visitation_order

__all__ = [
    "BudgetExhausted", "CayleyTMError", "DimensionOverflow", "EscapeError", "FiniteGroupError",
    "InvalidAlphabet", "LowDegreeResidue", "MachineError", "NoPath", "NotDecidable",
    "PointerClobber", "FiniteTable", "FinitelyPresented", "FreeAbelian", "FreeGroup",
    "GeneratorAlphabet", "InfiniteDihedral", "TapeGraph", "WordVerdict", "free_group", "grid",
    "infinite_dihedral", "integers", "validate_tape_graph", "Configuration", "MachineSpec",
    "initial_configuration", "run", "step", "word_problem_walk", "StandardTM", "bisimulate",
    "compile_machine", "transcribe_input", "visitation_order",
]
