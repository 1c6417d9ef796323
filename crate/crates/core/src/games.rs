//! Classical 2x2 game families and their payoff quadruples.
//!
//! All three families reduce to a quadruple (reward, sucker, temptation,
//! punishment) over the outcome basis (CC, CD, DC, DD), read from the row
//! player's side, plus the normalisation constant `alpha` used by the
//! imitation rule. `alpha` equals the spread between the largest and
//! smallest entry of the quadruple, which caps imitation probabilities at 1
//! for every degree pair.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Selects one of the three supported game families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    /// Weak prisoner's dilemma, parameterised by the temptation `b`.
    PrisonersDilemma,
    /// Snowdrift, parameterised by the cost-to-benefit ratio `r`.
    Snowdrift,
    /// Stag hunt, parameterised by the risk level `r`.
    StagHunt,
}

impl GameKind {
    /// Short code used in scenario names, CSV output, and the CLI.
    pub fn code(self) -> &'static str {
        match self {
            GameKind::PrisonersDilemma => "pd",
            GameKind::Snowdrift => "sd",
            GameKind::StagHunt => "sh",
        }
    }

    /// Name of the family parameter, used in error messages and plot axes.
    pub fn param_name(self) -> &'static str {
        match self {
            GameKind::PrisonersDilemma => "b",
            GameKind::Snowdrift | GameKind::StagHunt => "r",
        }
    }

    /// All kinds, in catalog order.
    pub fn all() -> [GameKind; 3] {
        [
            GameKind::PrisonersDilemma,
            GameKind::Snowdrift,
            GameKind::StagHunt,
        ]
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pd" => Ok(GameKind::PrisonersDilemma),
            "sd" => Ok(GameKind::Snowdrift),
            "sh" => Ok(GameKind::StagHunt),
            other => Err(Error::Config {
                field: "game".into(),
                reason: format!("unknown game {other:?}; expected one of pd, sd, sh"),
            }),
        }
    }
}

/// Payoff quadruple for one game instance, row-player convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffVector<T> {
    /// Payoff for mutual cooperation (outcome CC).
    pub reward: T,
    /// Payoff for cooperating against a defector (outcome CD).
    pub sucker: T,
    /// Payoff for defecting against a cooperator (outcome DC).
    pub temptation: T,
    /// Payoff for mutual defection (outcome DD).
    pub punishment: T,
    /// Imitation normalisation: the spread max - min of the quadruple.
    pub alpha: T,
    /// Family this instance belongs to.
    pub kind: GameKind,
    /// Family parameter (`b` for PD, `r` otherwise).
    pub param: T,
}

impl<T: Real> PayoffVector<T> {
    /// Quadruple in outcome order (CC, CD, DC, DD) for the row player.
    pub fn row_basis(&self) -> [T; 4] {
        [self.reward, self.sucker, self.temptation, self.punishment]
    }

    /// Quadruple in outcome order (CC, CD, DC, DD) for the column player:
    /// the column player collects the temptation at CD and the sucker
    /// payoff at DC.
    pub fn col_basis(&self) -> [T; 4] {
        [self.reward, self.temptation, self.sucker, self.punishment]
    }

    fn min(&self) -> T {
        self.reward
            .min(self.sucker)
            .min(self.temptation)
            .min(self.punishment)
    }

    fn max(&self) -> T {
        self.reward
            .max(self.sucker)
            .max(self.temptation)
            .max(self.punishment)
    }

    /// Spread max - min of the quadruple; always equals `alpha`.
    pub fn spread(&self) -> T {
        self.max() - self.min()
    }
}

/// Weak prisoner's dilemma: (R, S, T, P) = (1, 0, b, 0) with 1 < b <= 2.
///
/// `alpha` = T - S = b.
pub fn pd_payoffs<T: Real>(b: T) -> Result<PayoffVector<T>> {
    if !(b > T::one() && b <= T::of(2.0)) {
        return Err(Error::Domain {
            name: "b",
            value: b.to_f64().unwrap_or(f64::NAN),
            constraint: "1 < b <= 2",
        });
    }
    Ok(PayoffVector {
        reward: T::one(),
        sucker: T::zero(),
        temptation: b,
        punishment: T::zero(),
        alpha: b,
        kind: GameKind::PrisonersDilemma,
        param: b,
    })
}

/// Snowdrift with cost-to-benefit ratio 0 < r <= 1.
///
/// With b = (1 + r) / (2 r): (R, S, T, P) = (b - 1/2, b - 1, b, 0) and
/// `alpha` = T - P = b. At r = 1 the sucker payoff meets the punishment.
pub fn sd_payoffs<T: Real>(r: T) -> Result<PayoffVector<T>> {
    if !(r > T::zero() && r <= T::one()) {
        return Err(Error::Domain {
            name: "r",
            value: r.to_f64().unwrap_or(f64::NAN),
            constraint: "0 < r <= 1",
        });
    }
    let b = (T::one() + r) / (T::of(2.0) * r);
    Ok(PayoffVector {
        reward: b - T::of(0.5),
        sucker: b - T::one(),
        temptation: b,
        punishment: T::zero(),
        alpha: b,
        kind: GameKind::Snowdrift,
        param: r,
    })
}

/// Stag hunt with risk level 0 < r < 1: (R, S, T, P) = (1, -r, r, 0).
///
/// `alpha` = R - S = 1 + r.
pub fn sh_payoffs<T: Real>(r: T) -> Result<PayoffVector<T>> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::Domain {
            name: "r",
            value: r.to_f64().unwrap_or(f64::NAN),
            constraint: "0 < r < 1",
        });
    }
    Ok(PayoffVector {
        reward: T::one(),
        sucker: -r,
        temptation: r,
        punishment: T::zero(),
        alpha: T::one() + r,
        kind: GameKind::StagHunt,
        param: r,
    })
}

/// Dispatches to the family constructor for `kind`.
pub fn for_game<T: Real>(kind: GameKind, param: T) -> Result<PayoffVector<T>> {
    match kind {
        GameKind::PrisonersDilemma => pd_payoffs(param),
        GameKind::Snowdrift => sd_payoffs(param),
        GameKind::StagHunt => sh_payoffs(param),
    }
}
