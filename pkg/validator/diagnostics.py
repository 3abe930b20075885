from enum import Enum
from typing import Dict, List
import json


class Severity(Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"
    INFO = "INFO"


class Element(Enum):
    SYSTEM = "SYSTEM"
    COMPONENT = "COMPONENT"
    PORT = "PORT"
    CONNECTOR = "CONNECTOR"
    BEHAVIOR = "BEHAVIOR"
    GLUE = "GLUE"


def make_issue(
    code: str,
    message: str,
    element: Element,
    severity: Severity = Severity.ERROR,
) -> Dict:
    return {
        "code": code,
        "severity": severity.value,
        "element": element.value,
        "message": message,
    }


def has_errors(issues: List[Dict]) -> bool:
    return any(i["severity"] == Severity.ERROR.value for i in issues)


def emit_json_report(issues: List[Dict], path="output/validation_report.json"):
    data = {
        "status": "FAIL" if has_errors(issues) else "PASS",
        "issue_count": len(issues),
        "issues": issues,
    }
    with open(path, "w") as f:
        json.dump(data, f, indent=2)
