"""Knowledge and hope for byzantine agents: models, updates, model checking and translation."""
from .checker import (
    CountermodelResult, SearchBounds, Validity, evaluate, find_countermodel, random_model,
    truth_set, valid_in_model,
)
from .formula import (
    BOT, TOP, Atom, Conj, DynUpdate, Formula, Hope, Know, Neg, PubUpdate, Top, atom, b_at_least,
    belief, big_and, big_or, byz, complexity, correct, dual_hope, dual_know, expand_derived, faulty,
    iff, implies, lor, threshold, upd_group, upd_single,
)
from .kripke import (
    CandidateModel, KripkeModel, ModelError, ValidationReport, Violation, build_model, validate,
)
from .syntax import FormulaSyntaxError, parse, to_text
from .translate import RewriteTrace, translate
from .update import (
    HopeUpdateModel, PointedUpdateModel, apply_public, are_isomorphic, compose, embed_public,
    product,
)

__version__ = "0.1.0"
