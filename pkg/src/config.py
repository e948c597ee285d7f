from pydantic_settings import BaseSettings
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, List, Literal

# All of these are defaults, and can be overridden in the .env file
# (nested sections use "__", e.g. TRAIN__N_EVENTS=25)


class TrainConfig(BaseModel):
    """Hyperparameters of the adversarial training loop.

    Defaults: lambda=10, n_d=5, m=32, H=200,
    Adam(0.0002, 0.5, 0.999), a three-layer generator.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    n_events: int = Field(25, ge=2)
    hidden_size: int = Field(200, ge=1)
    disc_hidden_size: int = Field(200, ge=1)
    depth: Literal[3, 4, 5] = 3
    gp_lambda: float = Field(10.0, ge=0.0)
    n_critic: int = Field(5, ge=1)
    batch_size: int = Field(32, ge=2)
    learning_rate: float = Field(0.0002, gt=0.0)
    beta1: float = Field(0.5, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(1e-8, gt=0.0)
    # None means a symmetric prior of ones (uniform over the simplex)
    dirichlet_alpha: Optional[List[float]] = None
    max_g_steps: int = Field(3000, ge=1)
    seed: int = 0
    convergence_window: int = Field(100, ge=1)
    # the windowed-loss rule is not consulted before this many generator steps
    min_g_steps: int = Field(1000, ge=0)
    tolerance: float = Field(1e-3, ge=0.0)
    spectral_norm: bool = True
    gradient_penalty: bool = True
    non_saturating: bool = False
    gp_target: Literal["probability", "logit"] = "logit"
    n_power_iterations: int = Field(1, ge=1)
    leaky_slope: float = Field(0.1, ge=0.0, le=1.0)
    bn_momentum: float = Field(0.9, gt=0.0, lt=1.0)
    norm_eps: float = Field(1e-5, gt=0.0)
    checkpoint_every: int = Field(0, ge=0)

    @field_validator("dirichlet_alpha")
    @classmethod
    def check_alpha_positive(cls, v):
        if v is not None and any(a <= 0 for a in v):
            raise ValueError("every Dirichlet concentration must be > 0")
        return v

    @model_validator(mode="after")
    def check_alpha_length(self):
        if self.dirichlet_alpha is not None and len(self.dirichlet_alpha) != self.n_events:
            raise ValueError(
                f"dirichlet_alpha has {len(self.dirichlet_alpha)} entries, expected n_events={self.n_events}"
            )
        return self

    @property
    def alpha(self) -> List[float]:
        return list(self.dirichlet_alpha) if self.dirichlet_alpha is not None else [1.0] * self.n_events


class CorpusSettings(BaseModel):
    MIN_DF: Optional[int] = None  # None: pick from corpus size
    SMALL_CORPUS_MIN_DF: int = 1
    LARGE_CORPUS_MIN_DF: int = 3
    LARGE_CORPUS_THRESHOLD: int = 5000
    MIN_EVENT_DOCS: int = 0
    FIELD_SCHEMA: Literal["event", "news"] = "event"


class EventSettings(BaseModel):
    TOP_N: int = 5
    MERGE: bool = False
    MERGE_THRESHOLD: float = 0.5
    MERGE_TOP_K: int = 10

    @field_validator("MERGE_THRESHOLD")
    @classmethod
    def check_threshold(cls, v):
        if not 0.0 < v <= 1.0:
            raise ValueError("merge threshold must lie in (0, 1]")
        return v


class EvalSettings(BaseModel):
    MATCH_TOP_K: int = 10
    CORRECT_THRESHOLD: float = 0.3
    KMEANS_RESTARTS: int = 10


class SyntheticSettings(BaseModel):
    TRUE_EVENTS: int = 10
    DOCS_PER_EVENT: int = 100
    VOCAB_SIZE: int = 40
    TERMS_PER_EVENT: int = 5
    NOISE_RATE: float = 0.2
    TOKENS_PER_FIELD: int = 8


class OutputSettings(BaseModel):
    FLOAT_DIGITS: int = 17
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = True

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def upper_level(cls, v):
        return v.upper() if isinstance(v, str) else v


class Settings(BaseSettings):
    PROJECT_NAME: str = "Adversarial Event Model"
    corpus: CorpusSettings = CorpusSettings()
    train: TrainConfig = TrainConfig()
    events: EventSettings = EventSettings()
    evaluation: EvalSettings = EvalSettings()
    synthetic: SyntheticSettings = SyntheticSettings()
    output: OutputSettings = OutputSettings()

    model_config = {
        "env_file": ".env",
        "env_nested_delimiter": "__",
        "env_prefix": "",
        "extra": "ignore"
    }


settings = Settings()
