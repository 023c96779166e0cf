//! The (alpha, beta)-game engine.
//!
//! Bob opens with a ball `B0 = B(x0, rho)`; each round Alice picks
//! `A_n = B(y_n, rho alpha (alpha beta)^(n-1))` inside the previous Bob
//! ball and Bob answers with `B_n = B(x_n, rho (alpha beta)^n)` inside
//! `A_n`. The engine owns the radius schedule (strategies only pick
//! centers), validates every containment exactly in rational arithmetic,
//! and marks the transcript invalid at the first violation; the violator
//! forfeits. Games run either on the torus (wrapped max metric) or on a
//! leaf subspace in basis coordinates (plain max metric).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::torus::{TorusError, TorusPoint};
use crate::util::{rational_from_string, rational_to_string};

pub mod strategies;

pub use strategies::{
    avoid_strategy, project_strategy, round_robin_strategy, AvoidConfig, AvoidStrategy,
    CenterKeeping, GreedyBob, ProjectedStrategy, RandomBob, RoundRobin, StrategyState,
};

#[derive(Debug, Clone, PartialEq)]
pub enum GameError {
    Config(String),
    DimensionMismatch { expected: usize, got: usize },
    /// Operation needs a valid transcript.
    InvalidTranscript,
    Parse(String),
    Torus(TorusError),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::Config(msg) => write!(f, "game configuration: {msg}"),
            GameError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GameError::InvalidTranscript => write!(f, "transcript is invalid"),
            GameError::Parse(msg) => write!(f, "transcript parse: {msg}"),
            GameError::Torus(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GameError {}

impl From<TorusError> for GameError {
    fn from(e: TorusError) -> Self {
        GameError::Torus(e)
    }
}

// ---------------------------------------------------------------------------
// Spaces, balls, parameters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `T^d` with the wrapped max metric.
    Torus,
    /// A leaf `R^v` in basis coordinates with the plain max metric.
    Leaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub kind: SpaceKind,
    pub dim: usize,
}

impl Space {
    pub fn torus(dim: usize) -> Self {
        Space {
            kind: SpaceKind::Torus,
            dim,
        }
    }

    pub fn leaf(dim: usize) -> Self {
        Space {
            kind: SpaceKind::Leaf,
            dim,
        }
    }

    /// Max-norm distance, wrapped per coordinate on the torus.
    pub fn distance(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        let mut best = BigRational::zero();
        for (x, y) in a.iter().zip(b.iter()) {
            let d = match self.kind {
                SpaceKind::Torus => {
                    let diff = x - y;
                    let frac = &diff - diff.floor();
                    (BigRational::one() - &frac).min(frac)
                }
                SpaceKind::Leaf => (x - y).abs(),
            };
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Canonical representative of a center (mod 1 on the torus).
    pub fn normalize(&self, c: &[BigRational]) -> Vec<BigRational> {
        match self.kind {
            SpaceKind::Torus => c.iter().map(|x| x - x.floor()).collect(),
            SpaceKind::Leaf => c.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<BigRational>,
    pub radius: BigRational,
}

impl Ball {
    pub fn new(center: Vec<BigRational>, radius: BigRational) -> Self {
        Ball { center, radius }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Alice => write!(f, "A"),
            Role::Bob => write!(f, "B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameParams {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub initial: Ball,
}

impl GameParams {
    /// Validates `0 < alpha, beta < 1` and `rho <= 1/4` (so torus balls
    /// embed isometrically).
    pub fn new(alpha: BigRational, beta: BigRational, initial: Ball) -> Result<Self, GameError> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if alpha <= zero || alpha >= one {
            return Err(GameError::Config("alpha must lie in (0, 1)".into()));
        }
        if beta <= zero || beta >= one {
            return Err(GameError::Config("beta must lie in (0, 1)".into()));
        }
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        if initial.radius <= zero || initial.radius > quarter {
            return Err(GameError::Config(
                "initial radius must lie in (0, 1/4]".into(),
            ));
        }
        Ok(GameParams {
            alpha,
            beta,
            initial,
        })
    }

    /// Radius of Alice's ball in round `n >= 1`: `rho alpha (alpha beta)^(n-1)`.
    pub fn radius_alice(&self, n: usize) -> BigRational {
        let ab = &self.alpha * &self.beta;
        &self.initial.radius * &self.alpha * pow_rational(&ab, n - 1)
    }

    /// Radius of Bob's ball in round `n >= 0`: `rho (alpha beta)^n`.
    pub fn radius_bob(&self, n: usize) -> BigRational {
        let ab = &self.alpha * &self.beta;
        &self.initial.radius * pow_rational(&ab, n)
    }
}

pub fn pow_rational(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub round: usize,
    pub role: Role,
    /// By how much the containment constraint was exceeded.
    pub excess: BigRational,
}

/// Full record of a game: parameters, ball sequence, validity.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub space: Space,
    pub params: GameParams,
    /// `(role, ball)` starting with Bob's initial ball.
    pub moves: Vec<(Role, Ball)>,
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl Transcript {
    fn open(space: Space, params: GameParams) -> Self {
        let b0 = params.initial.clone();
        Transcript {
            space,
            params,
            moves: vec![(Role::Bob, b0)],
            valid: true,
            violation: None,
        }
    }

    pub fn last_ball(&self) -> &Ball {
        &self.moves.last().expect("transcript never empty").1
    }

    pub fn alice_balls(&self) -> impl Iterator<Item = &Ball> {
        self.moves
            .iter()
            .filter(|(r, _)| *r == Role::Alice)
            .map(|(_, b)| b)
    }

    pub fn bob_balls(&self) -> impl Iterator<Item = &Ball> {
        self.moves
            .iter()
            .filter(|(r, _)| *r == Role::Bob)
            .map(|(_, b)| b)
    }

    /// Completed rounds (Alice move count).
    pub fn rounds(&self) -> usize {
        self.moves.iter().filter(|(r, _)| *r == Role::Alice).count()
    }

    /// A relabeled view for a round-robin delegate: Alice moves at rounds
    /// the delegate did not play are presented as Bob moves.
    pub fn thinned_view(&self, own_rounds: &BTreeSet<usize>) -> Transcript {
        let mut round = 0usize;
        let moves = self
            .moves
            .iter()
            .map(|(role, ball)| {
                let new_role = match role {
                    Role::Bob => Role::Bob,
                    Role::Alice => {
                        round += 1;
                        if own_rounds.contains(&round) {
                            Role::Alice
                        } else {
                            Role::Bob
                        }
                    }
                };
                (new_role, ball.clone())
            })
            .collect();
        Transcript {
            space: self.space,
            params: self.params.clone(),
            moves,
            valid: self.valid,
            violation: self.violation.clone(),
        }
    }

    // -- serialization: line-delimited, bit-exact ---------------------------

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        out.push_str("torlab-game-v1\n");
        let kind = match self.space.kind {
            SpaceKind::Torus => "torus",
            SpaceKind::Leaf => "leaf",
        };
        out.push_str(&format!("space {kind} {}\n", self.space.dim));
        out.push_str(&format!(
            "alpha {}\nbeta {}\n",
            rational_to_string(&self.params.alpha),
            rational_to_string(&self.params.beta)
        ));
        for (i, (role, ball)) in self.moves.iter().enumerate() {
            let center = ball
                .center
                .iter()
                .map(rational_to_string)
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "move {i} {role} {center} {}\n",
                rational_to_string(&ball.radius)
            ));
        }
        out.push_str(&format!("valid {}\n", self.valid));
        if let Some(v) = &self.violation {
            out.push_str(&format!(
                "violation {} {} {}\n",
                v.round,
                v.role,
                rational_to_string(&v.excess)
            ));
        }
        out
    }

    pub fn from_lines(text: &str) -> Result<Transcript, GameError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GameError::Parse("empty".into()))?;
        if header != "torlab-game-v1" {
            return Err(GameError::Parse(format!("bad header: {header}")));
        }
        let mut space = None;
        let mut alpha = None;
        let mut beta = None;
        let mut moves: Vec<(Role, Ball)> = Vec::new();
        let mut valid = true;
        let mut violation = None;
        for line in lines {
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("space") => {
                    let kind = match parts.next() {
                        Some("torus") => SpaceKind::Torus,
                        Some("leaf") => SpaceKind::Leaf,
                        other => return Err(GameError::Parse(format!("bad space: {other:?}"))),
                    };
                    let dim: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| GameError::Parse("bad dim".into()))?;
                    space = Some(Space { kind, dim });
                }
                Some("alpha") => {
                    alpha = parts.next().and_then(rational_from_string);
                }
                Some("beta") => {
                    beta = parts.next().and_then(rational_from_string);
                }
                Some("move") => {
                    let _index: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| GameError::Parse("bad move index".into()))?;
                    let role = match parts.next() {
                        Some("A") => Role::Alice,
                        Some("B") => Role::Bob,
                        other => return Err(GameError::Parse(format!("bad role: {other:?}"))),
                    };
                    let center = parts
                        .next()
                        .ok_or_else(|| GameError::Parse("missing center".into()))?
                        .split(',')
                        .map(|s| {
                            rational_from_string(s)
                                .ok_or_else(|| GameError::Parse(format!("bad coord: {s}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let radius = parts
                        .next()
                        .and_then(rational_from_string)
                        .ok_or_else(|| GameError::Parse("bad radius".into()))?;
                    moves.push((role, Ball::new(center, radius)));
                }
                Some("valid") => {
                    valid = parts.next() == Some("true");
                }
                Some("violation") => {
                    let round: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| GameError::Parse("bad violation round".into()))?;
                    let role = match parts.next() {
                        Some("A") => Role::Alice,
                        Some("B") => Role::Bob,
                        other => return Err(GameError::Parse(format!("bad role: {other:?}"))),
                    };
                    let excess = parts
                        .next()
                        .and_then(rational_from_string)
                        .ok_or_else(|| GameError::Parse("bad excess".into()))?;
                    violation = Some(Violation {
                        round,
                        role,
                        excess,
                    });
                }
                _ => return Err(GameError::Parse(format!("unknown line: {line}"))),
            }
        }
        let space = space.ok_or_else(|| GameError::Parse("missing space".into()))?;
        let alpha = alpha.ok_or_else(|| GameError::Parse("missing alpha".into()))?;
        let beta = beta.ok_or_else(|| GameError::Parse("missing beta".into()))?;
        if moves.is_empty() {
            return Err(GameError::Parse("no moves".into()));
        }
        let initial = moves[0].1.clone();
        Ok(Transcript {
            space,
            params: GameParams {
                alpha,
                beta,
                initial,
            },
            moves,
            valid,
            violation,
        })
    }
}

// ---------------------------------------------------------------------------
// Strategy interface
// ---------------------------------------------------------------------------

/// A strategy carries immutable configuration; everything mutable is
/// threaded through a per-game [`StrategyState`], so one strategy value can
/// serve many concurrent games.
pub trait Strategy {
    fn name(&self) -> String;

    /// Alpha value this strategy is designed for, when it cares.
    fn required_alpha(&self) -> Option<BigRational> {
        None
    }

    /// Produces the next center. The view ends with the opponent's ball.
    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError>;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

/// Plays `rounds` rounds, Alice moving first. Geometric violations mark the
/// transcript invalid and stop the game; configuration errors surface as
/// `Err`.
pub fn play(
    alice: &dyn Strategy,
    bob: &dyn Strategy,
    params: &GameParams,
    space: Space,
    rounds: usize,
) -> Result<Transcript, GameError> {
    if rounds == 0 {
        return Err(GameError::Config("need at least one round".into()));
    }
    if params.initial.center.len() != space.dim {
        return Err(GameError::DimensionMismatch {
            expected: space.dim,
            got: params.initial.center.len(),
        });
    }
    for s in [alice, bob] {
        if let Some(a) = s.required_alpha() {
            if a != params.alpha {
                return Err(GameError::Config(format!(
                    "strategy {} requires alpha {}",
                    s.name(),
                    rational_to_string(&a)
                )));
            }
        }
    }
    let mut transcript = Transcript::open(space, params.clone());
    let mut alice_state = StrategyState::Empty;
    let mut bob_state = StrategyState::Empty;
    for n in 1..=rounds {
        for (role, strategy, state, radius) in [
            (
                Role::Alice,
                alice,
                &mut alice_state,
                params.radius_alice(n),
            ),
            (Role::Bob, bob, &mut bob_state, params.radius_bob(n)),
        ] {
            let center = strategy.choose(&transcript, state)?;
            if center.len() != space.dim {
                return Err(GameError::DimensionMismatch {
                    expected: space.dim,
                    got: center.len(),
                });
            }
            let center = space.normalize(&center);
            let outer = transcript.last_ball().clone();
            let dist = space.distance(&center, &outer.center);
            let slack = &outer.radius - &radius;
            let ball = Ball::new(center, radius);
            if dist > slack {
                transcript.moves.push((role, ball));
                transcript.valid = false;
                transcript.violation = Some(Violation {
                    round: n,
                    role,
                    excess: &dist - &slack,
                });
                return Ok(transcript);
            }
            transcript.moves.push((role, ball));
        }
    }
    Ok(transcript)
}

/// The limit point of a valid transcript: center of the last Bob ball with
/// the geometric error bound `rho (alpha beta)^R`.
pub fn limit_point(t: &Transcript) -> Result<(Vec<BigRational>, BigRational), GameError> {
    if !t.valid {
        return Err(GameError::InvalidTranscript);
    }
    let last_bob = t
        .moves
        .iter()
        .rev()
        .find(|(r, _)| *r == Role::Bob)
        .expect("transcript has Bob moves");
    Ok((last_bob.1.center.clone(), last_bob.1.radius.clone()))
}

/// Limit point as a torus point at the given precision; the stated error
/// bound covers both the geometric nesting and the fixed-point rounding.
pub fn limit_torus_point(t: &Transcript, precision: u32) -> Result<TorusPoint, GameError> {
    let (center, err) = limit_point(t)?;
    let p = TorusPoint::from_rationals(&center, precision)?;
    let rounding = p.error_bound().clone();
    Ok(p.with_error_bound(err + rounding))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn half_params() -> GameParams {
        GameParams::new(
            rat(1, 2),
            rat(1, 2),
            Ball::new(vec![rat(1, 8), rat(1, 4)], rat(1, 4)),
        )
        .unwrap()
    }

    #[test]
    fn stationary_game_keeps_center_and_schedule() {
        let keep = CenterKeeping;
        let t = play(&keep, &keep, &half_params(), Space::torus(2), 10).unwrap();
        assert!(t.valid);
        assert_eq!(t.rounds(), 10);
        for (n, ball) in t.alice_balls().enumerate() {
            assert_eq!(ball.radius, t.params.radius_alice(n + 1));
            assert_eq!(ball.center, t.params.initial.center);
        }
        for (n, ball) in t.bob_balls().enumerate() {
            assert_eq!(ball.radius, t.params.radius_bob(n));
        }
        let (limit, err) = limit_point(&t).unwrap();
        assert_eq!(limit, t.params.initial.center);
        // rho (alpha beta)^10 = 1/4 * 4^-10
        assert_eq!(err, rat(1, 4) * pow_rational(&rat(1, 4), 10));
    }

    #[test]
    fn forced_violation_is_attributed() {
        struct Jump;
        impl Strategy for Jump {
            fn name(&self) -> String {
                "jump".into()
            }
            fn choose(
                &self,
                view: &Transcript,
                _state: &mut StrategyState,
            ) -> Result<Vec<BigRational>, GameError> {
                // move a quarter turn away: always violates containment
                Ok(view
                    .last_ball()
                    .center
                    .iter()
                    .map(|c| c + rat(1, 4))
                    .collect())
            }
        }
        let keep = CenterKeeping;
        let t = play(&keep, &Jump, &half_params(), Space::torus(2), 5).unwrap();
        assert!(!t.valid);
        let v = t.violation.unwrap();
        assert_eq!(v.round, 1);
        assert_eq!(v.role, Role::Bob);
        assert!(v.excess.is_positive());
        assert!(limit_point(&t).is_err());
    }

    #[test]
    fn nesting_invariant_holds() {
        let keep = CenterKeeping;
        let t = play(&keep, &keep, &half_params(), Space::torus(2), 8).unwrap();
        for w in t.moves.windows(2) {
            let (outer, inner) = (&w[0].1, &w[1].1);
            let d = t.space.distance(&outer.center, &inner.center);
            assert!(d <= &outer.radius - &inner.radius);
        }
    }

    #[test]
    fn transcript_round_trips_through_lines() {
        let keep = CenterKeeping;
        let t = play(&keep, &keep, &half_params(), Space::torus(2), 6).unwrap();
        let text = t.to_lines();
        let back = Transcript::from_lines(&text).unwrap();
        assert_eq!(t, back);
        assert_eq!(text, back.to_lines());
    }

    #[test]
    fn leaf_space_uses_plain_metric() {
        let leaf = Space::leaf(1);
        let a = vec![rat(9, 10)];
        let b = vec![rat(0, 1)];
        assert_eq!(leaf.distance(&a, &b), rat(9, 10));
        assert_eq!(Space::torus(1).distance(&a, &b), rat(1, 10));
    }

    #[test]
    fn params_validation() {
        assert!(GameParams::new(
            rat(1, 1),
            rat(1, 2),
            Ball::new(vec![rat(0, 1)], rat(1, 4))
        )
        .is_err());
        assert!(GameParams::new(
            rat(1, 2),
            rat(1, 2),
            Ball::new(vec![rat(0, 1)], rat(1, 2))
        )
        .is_err());
    }
}
