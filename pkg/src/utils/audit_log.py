import os
import json
from datetime import datetime, timezone
from typing import List, Dict, Any

from .settings import audit_log_path


def log_action(action: str, details: Dict[str, Any]):
    """Append an action and its details to the run ledger."""
    path = audit_log_path()
    if not path:
        return
    entry = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "action": action,
        "details": details
    }
    with open(path, "a") as f:
        f.write(json.dumps(entry, default=str) + "\n")


def get_audit_log(limit: int = 100) -> List[Dict[str, Any]]:
    """Read the last N entries from the run ledger."""
    path = audit_log_path()
    if not path or not os.path.exists(path):
        return []
    with open(path, "r") as f:
        lines = f.readlines()[-limit:]
    return [json.loads(line.strip()) for line in lines if line.strip()]
