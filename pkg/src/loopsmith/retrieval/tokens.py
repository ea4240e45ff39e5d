"""C-ish lexical tokenizer feeding the BM25 base score."""

from __future__ import annotations

import re
from collections import Counter

_COMMENT = re.compile(r"/\*.*?\*/|//[^\n]*", re.S)
_TOKEN = re.compile(
    r"\d+\.\d+|\d+|[A-Za-z_]\w*"
    r"|<<=|>>=|<=|>=|==|!=|\+\+|--|\+=|-=|\*=|/=|%=|&&|\|\||<<|>>|->"
    r"|[-+*/%<>=;,.(){}\[\]&|!?:~^#]"
)


def tokenize(code: str) -> list:
    """Identifiers, keywords, operators and literals; comments and
    whitespace dropped."""
    return _TOKEN.findall(_COMMENT.sub(" ", code))


def token_counts(code: str) -> Counter:
    return Counter(tokenize(code))
