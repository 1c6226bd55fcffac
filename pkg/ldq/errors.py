"""
Exception hierarchy shared by every ldq module
"""
from __future__ import annotations

from typing import Optional


class LdqError(Exception):
    """Base class for all ldq errors"""


class BadTerm(LdqError):
    """Malformed term text or a term in an illegal triple position"""


class UnboundVariable(LdqError):
    def __init__(self, variable: str):
        super().__init__(f"variable ?{variable} is not bound")
        self.variable = variable


class IllegalPosition(LdqError):
    """Substitution would put a term where a triple does not allow it"""


class TooLarge(LdqError):
    def __init__(self, candidates: int, limit: int):
        super().__init__(f"{candidates} candidate valuations exceed the limit of {limit}")
        self.candidates = candidates
        self.limit = limit


class ParseError(LdqError):
    def __init__(self, position: int, expected: str, found: str):
        super().__init__(f"at offset {position}: expected {expected}, found {found}")
        self.position = position
        self.expected = expected
        self.found = found


class WebError(LdqError):
    """A web description violates the Web of Linked Data model"""


class BlankNodeSharing(WebError):
    pass


class NonSurjective(WebError):
    pass


class DuplicateDoc(WebError):
    pass


class UnknownDocument(WebError):
    def __init__(self, doc_id: str, detail: Optional[str] = None):
        super().__init__(detail or f"unknown document {doc_id!r}")
        self.doc_id = doc_id


class NotMaterializable(WebError):
    pass


class WebFormatError(WebError):
    """The web description file is not valid JSON of the expected shape"""


class CriterionError(LdqError):
    pass


class Unsupported(CriterionError):
    pass


class BudgetRequired(LdqError):
    pass


class UsageError(LdqError):
    pass


class StoreError(LdqError):
    pass
