"""High-level access policy: ordered subject -> object grants with change flags.

File format, one rule per line::

    # comment
    R <subject_id> <object_id> <fixed>
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class AccessRule:
    subject_id: int
    object_id: int
    fixed: int = 0

    def __post_init__(self):
        if self.subject_id <= 0 or self.object_id <= 0:
            raise ValidationError(f"principal ids must be positive: {self}")
        if self.subject_id == self.object_id:
            raise ValidationError(f"subject and object are the same principal: {self}")
        if self.fixed not in (0, 1):
            raise ValidationError(f"fixed must be 0 or 1, got {self.fixed!r}")

    @property
    def pair(self):
        return self.subject_id, self.object_id


@dataclass(frozen=True)
class SecurityPolicy:
    rules: tuple[AccessRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        seen = set()
        for rule in self.rules:
            if rule.pair in seen:
                raise ValidationError(f"duplicate rule for pair {rule.pair}")
            seen.add(rule.pair)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def pairs(self):
        return {rule.pair for rule in self.rules}

    def with_fixed(self, fixed):
        return SecurityPolicy(tuple(replace(r, fixed=fixed) for r in self.rules))


def _int_token(token, lineno, what):
    if not (token.isascii() and token.isdigit()):
        raise ParseError(lineno, f"{what} must be a decimal integer, got {token!r}")
    return int(token)


def parse_policy(text):
    rules = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split(" ")
        if len(tokens) != 4 or tokens[0] != "R":
            raise ParseError(lineno, f"expected 'R <subject> <object> <fixed>', got {raw!r}")
        subject = _int_token(tokens[1], lineno, "subject_id")
        obj = _int_token(tokens[2], lineno, "object_id")
        fixed = _int_token(tokens[3], lineno, "fixed")
        if fixed not in (0, 1):
            raise ParseError(lineno, f"fixed must be 0 or 1, got {fixed}")
        try:
            rule = AccessRule(subject, obj, fixed)
        except ValidationError as exc:
            raise ParseError(lineno, str(exc)) from None
        if rule.pair in seen:
            raise ValidationError(
                f"line {lineno}: duplicate rule {rule.pair} (first on line {seen[rule.pair]})"
            )
        seen[rule.pair] = lineno
        rules.append(rule)
    return SecurityPolicy(tuple(rules))


def serialize_policy(spm):
    return "".join(f"R {r.subject_id} {r.object_id} {r.fixed}\n" for r in spm.rules)


def load_policy(path):
    with open(path, encoding="utf-8") as fh:
        return parse_policy(fh.read())


def policy_dirty(spm):
    """True when any rule carries an unconsumed user edit."""
    return any(rule.fixed == 1 for rule in spm.rules)
