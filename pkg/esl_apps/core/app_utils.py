from typing import Any, Dict, List, Optional


def esl_message(
    success: bool = False,
    message: str = "",
    data: Optional[Any] = None,
    errors: Optional[List[str]] = None,
    error_details: Optional[List[str]] = None,
) -> Dict[str, Any]:
    return {
        "success": success,
        "message": message,
        "data": data if data is not None else {},
        "errors": list(errors or []),
        "error_details": list(error_details or []),
    }
