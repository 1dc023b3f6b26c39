"""Winner sets, smallest minimal supports, and certified explanations
for (weighted) tournaments."""

from .model import (
    CandidateSet,
    GuardExceededError,
    IncompleteTournamentError,
    PartialTournament,
    Rule,
    Support,
    SupportCompatibilityError,
    TournamentFormatError,
    WeightedTournament,
    enumerate_completions,
    extends,
    parse_tournament,
    serialize_tournament,
)
from .necessary import (
    ScoreBounds,
    ScoreMargin,
    is_necessary_winner,
    is_necessary_winner_bruteforce,
    score_bounds,
    score_margins,
)
from .sms import (
    NotAWinnerError,
    SizeFormulaInput,
    SmsResult,
    SupportVerdict,
    compute_sms,
    sms_borda,
    sms_cop,
    sms_mm,
    sms_size_formula,
    sms_tc,
    sms_uc,
    sms_wuc_exact,
    verify_support,
)
from .solutions import (
    ScoreTable,
    WinnerSet,
    borda,
    copeland,
    maximin,
    top_cycle,
    uncovered_set,
    weighted_uncovered_set,
    winners,
)

__version__ = "0.1.0"
