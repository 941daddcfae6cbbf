"""Public announcement logic with relativized common knowledge on finite
Kripke models: parser, two evaluators, bounded search, and case studies."""
from .checker import (Countermodel, Inconclusive, Mode, SearchBounds, ValidUpTo,
                      bounded_consequence, bounded_valid, bounded_valid_lazy)
from .errors import (CapExceeded, EmptyDomain, ModelError, PalError, ParseError,
                     UnboundSchematic, UnknownAgent, UnknownWorld)
from .formula import parse, to_text
from .kripke import FrameClass, KripkeModel, load_model, restrict, save_model, to_dot
from .semantics import Denotation, eval_direct, eval_sse, extension, valid_in_model, vld_p, vld_t

__version__ = "0.1.0"
