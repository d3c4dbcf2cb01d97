from pydantic import BaseModel, ConfigDict

from .skew import SkewSystem


class ZInfFixture(BaseModel):
    """The shift on Z_inf twisted by the flip f(0) = -1 (1 elsewhere and at infinity)."""
    model_config = ConfigDict(frozen=True)

    system: SkewSystem
    n_o: int = 1
    m_o: int = 2
    k_o: int = 2

    @property
    def expected(self) -> tuple:
        return self.n_o, self.m_o, self.k_o
