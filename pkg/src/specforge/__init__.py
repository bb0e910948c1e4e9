"""specforge: abstract specifications and their instantiation."""

from .errors import (AdmissionError, CopyFunError, EvalError, ObligationError, ParseError,
                     SpecforgeError, SubstitutionError, TranslateError)
from .instantiate import build_substitution, definstance_obligations, instance_of_defspec
from .session import Session, base_world
from .syntax import NIL, T, Pair, Sym, read, show, translate, untranslate
from .world import World

__version__ = "0.1.0"
