//! Entangled two-qubit pair game: strategies, gates, and exact payoffs.
//!
//! Both players act on |00> through an entangling gate J(omega), local
//! strategy unitaries U1 (x) U2, and the disentangling adjoint of J.
//! Measuring the result in the computational basis yields a distribution
//! over the classical outcomes (CC, CD, DC, DD); payoffs are expectations
//! of a [`PayoffVector`] under that distribution.
//!
//! Basis order is (|00>, |01>, |10>, |11>) with the row player's qubit
//! first. All algebra is exact up to floating-point rounding; nothing here
//! is sampled.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::games::PayoffVector;
use crate::scalar::Real;

/// Complex amplitude over the scalar `T`.
pub type ComplexScalar<T> = Complex<T>;

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
fn cre<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
fn cim<T: Real>(im: T) -> Complex<T> {
    Complex::new(T::zero(), im)
}

/// Single-qubit strategy labels, including the two-parameter family
/// Y(gamma, phi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy<T> {
    /// Identity: classical cooperation.
    Cooperate,
    /// Bit flip: classical defection.
    Defect,
    /// Hadamard: the balanced superposition strategy.
    Hadamard,
    /// i * diag(1, -1): the phase strategy that punishes defection.
    Quantum,
    /// General unitary with 0 <= gamma <= pi and 0 <= phi <= pi/2:
    /// rows (e^{i phi} cos(gamma/2), sin(gamma/2)) and
    /// (-sin(gamma/2), e^{-i phi} cos(gamma/2)).
    General { gamma: T, phi: T },
}

impl<T: Real> Strategy<T> {
    /// Display label: single letters for the named strategies.
    pub fn label(&self) -> String {
        match self {
            Strategy::Cooperate => "C".into(),
            Strategy::Defect => "D".into(),
            Strategy::Hadamard => "H".into(),
            Strategy::Quantum => "Q".into(),
            Strategy::General { gamma, phi } => format!("Y({gamma},{phi})"),
        }
    }

    /// Checks the parameter ranges of the general family; named strategies
    /// are always valid.
    pub fn validate(&self) -> Result<()> {
        if let Strategy::General { gamma, phi } = *self {
            if !(gamma >= T::zero() && gamma <= T::PI()) {
                return Err(Error::Domain {
                    name: "gamma",
                    value: gamma.to_f64().unwrap_or(f64::NAN),
                    constraint: "0 <= gamma <= pi",
                });
            }
            if !(phi >= T::zero() && phi <= T::FRAC_PI_2()) {
                return Err(Error::Domain {
                    name: "phi",
                    value: phi.to_f64().unwrap_or(f64::NAN),
                    constraint: "0 <= phi <= pi/2",
                });
            }
        }
        Ok(())
    }
}

impl<T: Real> fmt::Display for Strategy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl<T: Real> FromStr for Strategy<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(Strategy::Cooperate),
            "D" | "d" => Ok(Strategy::Defect),
            "H" | "h" => Ok(Strategy::Hadamard),
            "Q" | "q" => Ok(Strategy::Quantum),
            other => Err(Error::Config {
                field: "strategy".into(),
                reason: format!("unknown strategy {other:?}; expected one of C, D, H, Q"),
            }),
        }
    }
}

/// A 2x2 unitary acting on one player's qubit.
#[derive(Clone, Copy, Debug)]
pub struct SingleQubitUnitary<T>([[Complex<T>; 2]; 2]);

impl<T: Real> SingleQubitUnitary<T> {
    /// Wraps a matrix after checking unitarity at the algebraic tolerance.
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let u = SingleQubitUnitary(entries);
        let defect = u.unitarity_defect();
        if defect > T::algebraic_tol() {
            return Err(Error::Config {
                field: "unitary".into(),
                reason: format!("matrix deviates from unitarity by {defect:e}"),
            });
        }
        Ok(u)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.0[row][col]
    }

    /// Largest absolute deviation of U* U from the identity.
    pub fn unitarity_defect(&self) -> T {
        let u = &self.0;
        let mut worst = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                let sum: Complex<T> = u.iter().map(|row| row[r].conj() * row[c]).sum();
                let expect = if r == c { T::one() } else { T::zero() };
                let dev = (sum - cre::<T>(expect)).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }
}

/// Builds the unitary for a strategy label.
pub fn strategy_unitary<T: Real>(strategy: Strategy<T>) -> Result<SingleQubitUnitary<T>> {
    strategy.validate()?;
    let one = T::one();
    let entries = match strategy {
        Strategy::Cooperate => [[cre(one), czero()], [czero(), cre(one)]],
        Strategy::Defect => [[czero(), cre(one)], [cre(one), czero()]],
        Strategy::Hadamard => {
            let h = T::FRAC_1_SQRT_2();
            [[cre(h), cre(h)], [cre(h), cre(-h)]]
        }
        Strategy::Quantum => [[cim(one), czero()], [czero(), cim(-one)]],
        Strategy::General { gamma, phi } => {
            let half = gamma * T::of(0.5);
            let (sin, cos) = (half.sin(), half.cos());
            let phase = Complex::new(phi.cos(), phi.sin());
            [
                [phase * cos, cre(sin)],
                [cre(-sin), phase.conj() * cos],
            ]
        }
    };
    SingleQubitUnitary::new(entries)
}

/// The entangling gate J(omega) = cos(omega/2) I + i sin(omega/2) X (x) X.
///
/// omega ranges over [0, pi/2]: separable play at 0, maximal entanglement
/// at pi/2.
#[derive(Clone, Debug)]
pub struct Entangler<T> {
    omega: T,
    matrix: [[Complex<T>; 4]; 4],
}

/// Builds J(omega) after checking 0 <= omega <= pi/2.
pub fn entangler<T: Real>(omega: T) -> Result<Entangler<T>> {
    if !(omega >= T::zero() && omega <= T::FRAC_PI_2()) {
        return Err(Error::Domain {
            name: "omega",
            value: omega.to_f64().unwrap_or(f64::NAN),
            constraint: "0 <= omega <= pi/2",
        });
    }
    let half = omega * T::of(0.5);
    let cos = cre(half.cos());
    let isin = cim(half.sin());
    let mut matrix = [[czero(); 4]; 4];
    // X (x) X is the anti-diagonal permutation k -> 3 - k.
    for k in 0..4 {
        matrix[k][k] = cos;
        matrix[k][3 - k] += isin;
    }
    Ok(Entangler { omega, matrix })
}

impl<T: Real> Entangler<T> {
    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn matrix(&self) -> &[[Complex<T>; 4]; 4] {
        &self.matrix
    }

    /// Largest absolute deviation of J* J from the identity.
    pub fn unitarity_defect(&self) -> T {
        let j = &self.matrix;
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                let sum: Complex<T> = j.iter().map(|row| row[r].conj() * row[c]).sum();
                let expect = if r == c { T::one() } else { T::zero() };
                worst = worst.max((sum - cre::<T>(expect)).norm());
            }
        }
        worst
    }
}

/// Pure state of the two-qubit register in basis (|00>, |01>, |10>, |11>).
#[derive(Clone, Copy, Debug)]
pub struct TwoQubitState<T>([Complex<T>; 4]);

impl<T: Real> TwoQubitState<T> {
    pub fn amplitudes(&self) -> &[Complex<T>; 4] {
        &self.0
    }

    /// Measurement probabilities in the computational basis.
    pub fn probabilities(&self) -> [T; 4] {
        [
            self.0[0].norm_sqr(),
            self.0[1].norm_sqr(),
            self.0[2].norm_sqr(),
            self.0[3].norm_sqr(),
        ]
    }

    /// |sum of probabilities - 1|.
    pub fn norm_defect(&self) -> T {
        let total: T = self.probabilities().into_iter().sum();
        (total - T::one()).abs()
    }
}

/// Probability distribution over the outcomes (CC, CD, DC, DD).
#[derive(Clone, Copy, Debug)]
pub struct OutcomeDistribution<T> {
    probabilities: [T; 4],
}

impl<T: Real> OutcomeDistribution<T> {
    /// Wraps probabilities after checking non-negativity and unit sum at
    /// the algebraic tolerance.
    pub fn new(probabilities: [T; 4]) -> Result<Self> {
        let tol = T::algebraic_tol();
        for (k, &p) in probabilities.iter().enumerate() {
            if p < -tol || p.is_nan() {
                return Err(Error::Config {
                    field: "probabilities".into(),
                    reason: format!("entry {k} is negative: {p:e}"),
                });
            }
        }
        let total: T = probabilities.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::Config {
                field: "probabilities".into(),
                reason: format!("sum {total:e} is not 1"),
            });
        }
        Ok(OutcomeDistribution { probabilities })
    }

    /// Probabilities in outcome order (CC, CD, DC, DD).
    pub fn probabilities(&self) -> [T; 4] {
        self.probabilities
    }
}

fn kron2<T: Real>(
    a: &SingleQubitUnitary<T>,
    b: &SingleQubitUnitary<T>,
) -> [[Complex<T>; 4]; 4] {
    let mut out = [[czero(); 4]; 4];
    for ar in 0..2 {
        for ac in 0..2 {
            for br in 0..2 {
                for bc in 0..2 {
                    out[2 * ar + br][2 * ac + bc] = a.entry(ar, ac) * b.entry(br, bc);
                }
            }
        }
    }
    out
}

fn mat4_apply<T: Real>(m: &[[Complex<T>; 4]; 4], v: &[Complex<T>; 4]) -> [Complex<T>; 4] {
    let mut out = [czero(); 4];
    for (r, slot) in out.iter_mut().enumerate() {
        *slot = m[r].iter().zip(v).map(|(a, b)| *a * *b).sum();
    }
    out
}

fn mat4_adjoint_apply<T: Real>(
    m: &[[Complex<T>; 4]; 4],
    v: &[Complex<T>; 4],
) -> [Complex<T>; 4] {
    let mut out = [czero(); 4];
    for (r, slot) in out.iter_mut().enumerate() {
        *slot = m.iter().zip(v).map(|(row, b)| row[r].conj() * *b).sum();
    }
    out
}

/// Final register state for an ordered strategy pair:
/// adjoint(J) (U_row (x) U_col) J |00>.
pub fn final_state<T: Real>(
    row: Strategy<T>,
    col: Strategy<T>,
    omega: T,
) -> Result<TwoQubitState<T>> {
    let ent = entangler(omega)?;
    let u_row = strategy_unitary(row)?;
    let u_col = strategy_unitary(col)?;

    let mut initial = [czero(); 4];
    initial[0] = cre(T::one());
    let entangled = mat4_apply(ent.matrix(), &initial);
    let played = mat4_apply(&kron2(&u_row, &u_col), &entangled);
    let disentangled = mat4_adjoint_apply(ent.matrix(), &played);
    Ok(TwoQubitState(disentangled))
}

/// Measurement distribution for an ordered strategy pair.
pub fn outcome_distribution<T: Real>(
    row: Strategy<T>,
    col: Strategy<T>,
    omega: T,
) -> Result<OutcomeDistribution<T>> {
    let state = final_state(row, col, omega)?;
    OutcomeDistribution::new(state.probabilities())
}

/// Expected row-player payoff of a distribution under a payoff quadruple.
pub fn expected_payoff<T: Real>(dist: &OutcomeDistribution<T>, game: &PayoffVector<T>) -> T {
    let p = dist.probabilities();
    let v = game.row_basis();
    p[0] * v[0] + p[1] * v[1] + p[2] * v[2] + p[3] * v[3]
}

/// Exact payoff lookup for every ordered pair from a fixed strategy set.
#[derive(Clone, Debug)]
pub struct PairPayoffTable<T> {
    labels: Vec<String>,
    strategies: Vec<Strategy<T>>,
    omega: T,
    game: PayoffVector<T>,
    row: Vec<T>,
    col: Vec<T>,
}

/// Builds the payoff table for a strategy set, a game, and an entanglement
/// level. The set must be non-empty and free of duplicates.
pub fn build_pair_table<T: Real>(
    strategies: &[Strategy<T>],
    game: &PayoffVector<T>,
    omega: T,
) -> Result<PairPayoffTable<T>> {
    if strategies.is_empty() {
        return Err(Error::Config {
            field: "strategies".into(),
            reason: "strategy set must not be empty".into(),
        });
    }
    for (i, a) in strategies.iter().enumerate() {
        for b in strategies.iter().skip(i + 1) {
            if a == b {
                return Err(Error::Config {
                    field: "strategies".into(),
                    reason: format!("duplicate strategy {a}"),
                });
            }
        }
    }

    let n = strategies.len();
    let mut row = vec![T::zero(); n * n];
    let mut col = vec![T::zero(); n * n];
    let row_basis = game.row_basis();
    let col_basis = game.col_basis();
    for (i, &a) in strategies.iter().enumerate() {
        for (j, &b) in strategies.iter().enumerate() {
            let p = outcome_distribution(a, b, omega)?.probabilities();
            let mut rp = T::zero();
            let mut cp = T::zero();
            for k in 0..4 {
                rp += p[k] * row_basis[k];
                cp += p[k] * col_basis[k];
            }
            row[i * n + j] = rp;
            col[i * n + j] = cp;
        }
    }

    Ok(PairPayoffTable {
        labels: strategies.iter().map(Strategy::label).collect(),
        strategies: strategies.to_vec(),
        omega,
        game: *game,
        row,
        col,
    })
}

impl<T: Real> PairPayoffTable<T> {
    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn strategies(&self) -> &[Strategy<T>] {
        &self.strategies
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn game(&self) -> &PayoffVector<T> {
        &self.game
    }

    /// Payoff to the row player when row strategy `i` meets column
    /// strategy `j`.
    pub fn row_payoff(&self, i: usize, j: usize) -> T {
        self.row[i * self.strategies.len() + j]
    }

    /// Payoff to the column player in the same encounter.
    pub fn col_payoff(&self, i: usize, j: usize) -> T {
        self.col[i * self.strategies.len() + j]
    }

    /// Flat row-player payoffs in row-major order; the hot path for the
    /// dynamics loop.
    pub fn row_flat(&self) -> &[T] {
        &self.row
    }
}
