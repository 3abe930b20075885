from validator.validate_all import validate_all, ensure_valid
from validator.architecture_validator import validate_architecture
from validator.alternation_validator import check_strict_alternation
from validator.diagnostics import Element, Severity, make_issue, emit_json_report
