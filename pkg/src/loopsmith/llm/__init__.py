from .prompts import (
    GENERATION_RULES,
    PromptKind,
    extract_code_block,
    find_target_code,
    render_prompt,
)
from .providers import (
    AuditLog,
    CannedTransformProvider,
    CaptureProvider,
    ChatMessage,
    ChatTranscript,
    HttpChatProvider,
    ReplayProvider,
    complete,
    transcript_hash,
)

__all__ = [
    "AuditLog", "CannedTransformProvider", "CaptureProvider", "ChatMessage",
    "ChatTranscript", "GENERATION_RULES", "HttpChatProvider", "PromptKind",
    "ReplayProvider", "complete", "extract_code_block", "find_target_code",
    "render_prompt", "transcript_hash",
]
