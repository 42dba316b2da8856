"""ID-logic: classical first-order logic extended with inductive definitions.

Definitions are interpreted by the well-founded semantics over finite
structures.  The package provides the syntax and a parser/printer,
three-valued structures, grounding, the well-founded engine and model
checking/enumeration, static analysis, equivalence-preserving
transformations, and builders for common embeddings.
"""

from .analysis import (
    DefinitionClass,
    check_relativized,
    check_well_defining,
    check_well_founded,
    classify,
    dependency_graph,
    is_hierarchy,
    split_theory,
    strata,
)
from .embeddings import (
    AbductiveFramework,
    DeductiveDatabase,
    Effect,
    FluentSpec,
    build_frame_definition,
    dca_una,
    frame_theory,
    import_abductive,
    import_deductive_db,
    import_logic_program,
    table_definition,
)
from .engine import (
    Verdict,
    check,
    enumerate_models,
    enumerate_models_naive,
    is_justified,
    is_model,
    justified_extension,
    literal_well_founded_model,
    stable_operator,
    well_founded_model,
    well_founded_state,
)
from .errors import (
    EmbeddingError,
    EvaluationError,
    GateError,
    IDLogicError,
    LimitExceeded,
    NotTotalError,
    ParseError,
    StructureError,
    SyntaxModelError,
)
from .grounder import ground_definition, ground_literal_oracle, ground_sentence
from .parser import parse_formula, parse_theory, render_formula, render_theory
from .structures import Structure, TruthValue, eval_formula, parse_structure, render_structure
from .syntax import Definition, Rule, Theory, Vocabulary
from .transforms import (
    clark_completion,
    compose,
    equivalent_3valued,
    merge_cases,
    normalize_head,
    substitute_equivalent,
    three_valued_tautology,
)

__version__ = "0.1.0"

__all__ = [
    "AbductiveFramework",
    "DeductiveDatabase",
    "Definition",
    "DefinitionClass",
    "Effect",
    "EmbeddingError",
    "EvaluationError",
    "FluentSpec",
    "GateError",
    "IDLogicError",
    "LimitExceeded",
    "NotTotalError",
    "ParseError",
    "Rule",
    "Structure",
    "StructureError",
    "SyntaxModelError",
    "Theory",
    "TruthValue",
    "Verdict",
    "Vocabulary",
    "build_frame_definition",
    "check",
    "check_relativized",
    "check_well_defining",
    "check_well_founded",
    "clark_completion",
    "classify",
    "compose",
    "dca_una",
    "dependency_graph",
    "enumerate_models",
    "enumerate_models_naive",
    "equivalent_3valued",
    "eval_formula",
    "frame_theory",
    "ground_definition",
    "ground_literal_oracle",
    "ground_sentence",
    "import_abductive",
    "import_deductive_db",
    "import_logic_program",
    "is_hierarchy",
    "is_justified",
    "is_model",
    "justified_extension",
    "literal_well_founded_model",
    "merge_cases",
    "normalize_head",
    "parse_formula",
    "parse_structure",
    "parse_theory",
    "render_formula",
    "render_structure",
    "render_theory",
    "split_theory",
    "stable_operator",
    "strata",
    "substitute_equivalent",
    "table_definition",
    "three_valued_tautology",
    "well_founded_model",
    "well_founded_state",
    "__version__",
]
