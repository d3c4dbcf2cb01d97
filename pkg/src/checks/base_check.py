from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class CheckResponse(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    success: bool
    data: Optional[Dict[str, Any]] = None
    error: Optional[str] = None


class SuiteReport(BaseModel):
    """Ordered outcomes of a verification suite."""
    suite: str
    results: Dict[str, CheckResponse] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.success for r in self.results.values())

    @property
    def failures(self) -> List[str]:
        return [name for name, r in self.results.items() if not r.success]

    def summary(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "failures": self.failures,
            "checks": {name: r.model_dump(mode="json") for name, r in self.results.items()},
        }


class BaseCheck(ABC):
    def __init__(self, check_id: str, name: str, description: str):
        self.check_id = check_id
        self.name = name
        self.description = description

    @abstractmethod
    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        """
        Run the check on the input data and return a response.
        """

    def get_check_info(self) -> Dict[str, str]:
        return {
            "check_id": self.check_id,
            "name": self.name,
            "description": self.description,
        }

    def validate_input(self, input_data: Dict[str, Any]) -> bool:
        """
        Validate the input data before running.
        Can be overridden by subclasses for specific validation logic.
        """
        return True

    def __call__(self, input_data: Dict[str, Any]) -> CheckResponse:
        if not self.validate_input(input_data):
            return CheckResponse(success=False, error=f"{self.name}: invalid input")
        try:
            return self.run(input_data)
        except Exception as e:
            return CheckResponse(success=False, error=f"{self.name}: {type(e).__name__}: {e}")


class FunctionCheck(BaseCheck):
    """Wraps a callable returning (success, data) as a check."""

    def __init__(self, check_id: str, name: str, fn, description: str = ""):
        super().__init__(check_id, name, description or name)
        self.fn = fn

    def run(self, input_data: Dict[str, Any]) -> CheckResponse:
        success, data = self.fn(**input_data)
        return CheckResponse(
            success=bool(success),
            data=data,
            error=None if success else f"{self.name} failed",
        )
