"""Uniform pass/fail reports produced by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        d = {"name": self.name, "passed": self.passed}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))
        return passed

    def note(self, text):
        self.notes.append(text)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        d = {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def lines(self):
        out = [f"[{'PASS' if self.passed else 'FAIL'}] {self.title}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            detail = f"  ({c.detail})" if c.detail else ""
            out.append(f"  {mark} {c.name}{detail}")
        for n in self.notes:
            out.append(f"  note: {n}")
        return out

    def __str__(self):
        return "\n".join(self.lines())
