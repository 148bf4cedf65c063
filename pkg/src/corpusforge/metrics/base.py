"""Score containers that keep raw counts so corpus scores are micro-averages."""

from __future__ import annotations

from dataclasses import dataclass


def _ratio(num: float, den: float, other_den: float) -> float:
    # nothing predicted and nothing to find counts as perfect agreement
    if den:
        return num / den
    return 1.0 if not other_den else 0.0


@dataclass(frozen=True)
class PRF:
    """Precision and recall as numerator/denominator pairs.

    Summing two PRFs sums the counts, which is exactly micro-averaging.
    """

    p_num: float = 0.0
    p_den: float = 0.0
    r_num: float = 0.0
    r_den: float = 0.0

    @property
    def precision(self) -> float:
        return _ratio(self.p_num, self.p_den, self.r_den)

    @property
    def recall(self) -> float:
        return _ratio(self.r_num, self.r_den, self.p_den)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0

    def __add__(self, other: "PRF") -> "PRF":
        return PRF(self.p_num + other.p_num, self.p_den + other.p_den,
                   self.r_num + other.r_num, self.r_den + other.r_den)

    def swapped(self) -> "PRF":
        return PRF(self.r_num, self.r_den, self.p_num, self.p_den)

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "counts": [self.p_num, self.p_den, self.r_num, self.r_den]}


@dataclass(frozen=True)
class Accuracy:
    correct: int = 0
    total: int = 0

    @property
    def value(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def __float__(self):
        return self.value

    def __add__(self, other: "Accuracy") -> "Accuracy":
        return Accuracy(self.correct + other.correct, self.total + other.total)

    def to_dict(self) -> dict:
        return {"accuracy": self.value, "correct": self.correct, "total": self.total}


@dataclass(frozen=True)
class AttachmentScores:
    head_correct: int = 0
    label_correct: int = 0
    total: int = 0

    @property
    def uas(self) -> float:
        return self.head_correct / self.total if self.total else 0.0

    @property
    def las(self) -> float:
        return self.label_correct / self.total if self.total else 0.0

    def __add__(self, other: "AttachmentScores") -> "AttachmentScores":
        return AttachmentScores(self.head_correct + other.head_correct,
                                self.label_correct + other.label_correct, self.total + other.total)

    def to_dict(self) -> dict:
        return {"uas": self.uas, "las": self.las, "total": self.total}


@dataclass(frozen=True)
class CorefScores:
    muc: PRF = PRF()
    b3: PRF = PRF()
    ceaf_e: PRF = PRF()

    @property
    def avg_f1(self) -> float:
        return (self.muc.f1 + self.b3.f1 + self.ceaf_e.f1) / 3

    def __add__(self, other: "CorefScores") -> "CorefScores":
        return CorefScores(self.muc + other.muc, self.b3 + other.b3, self.ceaf_e + other.ceaf_e)

    def to_dict(self) -> dict:
        return {"muc": self.muc.to_dict(), "b3": self.b3.to_dict(),
                "ceaf_e": self.ceaf_e.to_dict(), "avg_f1": self.avg_f1}


@dataclass(frozen=True)
class RSTScores:
    span_prf: PRF = PRF()
    nuclearity_prf: PRF = PRF()
    relation_prf: PRF = PRF()

    @property
    def span(self) -> float:
        return self.span_prf.f1

    @property
    def nuclearity(self) -> float:
        return self.nuclearity_prf.f1

    @property
    def relation(self) -> float:
        return self.relation_prf.f1

    def __add__(self, other: "RSTScores") -> "RSTScores":
        return RSTScores(self.span_prf + other.span_prf, self.nuclearity_prf + other.nuclearity_prf,
                         self.relation_prf + other.relation_prf)

    def to_dict(self) -> dict:
        return {"span": self.span, "nuclearity": self.nuclearity, "relation": self.relation,
                "detail": {"span": self.span_prf.to_dict(), "nuclearity": self.nuclearity_prf.to_dict(),
                           "relation": self.relation_prf.to_dict()}}
