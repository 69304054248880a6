"""Conference review management: submission, bidding, distribution,
review tracking, decisions and proceedings."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Assignment,
    Author,
    Bid,
    BidPriority,
    Classification,
    Config,
    ContactInfo,
    Credentials,
    KnowledgeLevel,
    PaperRecord,
    PaperStatus,
    Review,
    ReviewerProfile,
    ReviewState,
    Role,
    Topic,
    Willingness,
)
from .registry import Store  # noqa: F401
from .workflow import ConferenceService, PaperMetadata  # noqa: F401
