from .backend import BackendConfig, HttpBackend, MockBackend
from .detector import DetectionResponse, append_feedback, detect, load_feedback, parse_response
from .prompt import PromptBundle, RULE_STATEMENTS, build_prompt, render_window

__all__ = [
    "BackendConfig",
    "DetectionResponse",
    "HttpBackend",
    "MockBackend",
    "PromptBundle",
    "RULE_STATEMENTS",
    "append_feedback",
    "build_prompt",
    "detect",
    "load_feedback",
    "parse_response",
    "render_window",
]
