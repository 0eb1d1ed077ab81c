"""repcount: exact representation counts of integral forms by forms,
plus a desk-scale lab for the circle-method prediction they converge to
(real density, p-adic densities, singular series, exponential sums)."""

__version__ = "0.1.0"

from .forms import (
    ExpandedSystem,
    Form,
    TargetForm,
    Verdict,
    evaluate_form,
    expand_system,
    is_positive_definite,
    multi_index_set,
    parse_form,
    quadratic_singular_dim,
)
from .enumeration import (
    Box,
    SnfResult,
    count_boxed,
    count_lattice,
    count_representations,
    gamma_product_identity,
    list_representations,
    smith_normal_form,
)
from .errors import BudgetError, FormParseError, InputError, RepcountError

__all__ = [
    "Box",
    "BudgetError",
    "ExpandedSystem",
    "Form",
    "FormParseError",
    "InputError",
    "RepcountError",
    "SnfResult",
    "TargetForm",
    "Verdict",
    "count_boxed",
    "count_lattice",
    "count_representations",
    "evaluate_form",
    "expand_system",
    "gamma_product_identity",
    "is_positive_definite",
    "list_representations",
    "multi_index_set",
    "parse_form",
    "quadratic_singular_dim",
    "smith_normal_form",
]
