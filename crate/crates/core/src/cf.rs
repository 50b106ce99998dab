//! Irrationals in `(0,1)` given by their continued-fraction expansion, and
//! exact order decisions in `Z + θZ`.
//!
//! Every decision here is a finite digit-by-digit comparison: a rational has
//! a finite expansion, so comparing it with an irrational stops at the first
//! differing partial quotient or right after the rational's expansion ends.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("theta must lie strictly between 0 and 1")]
    ThetaOutOfRange,
    #[error("D = {0} is a perfect square, so the surd is rational")]
    DIsPerfectSquare(BigInt),
    #[error("invalid surd: {0}")]
    InvalidSurd(String),
    #[error("partial quotient a_{index} is beyond the budget of {budget} quotients")]
    StreamExhausted { index: usize, budget: usize },
    #[error("partial quotient a_{index} must be a positive integer")]
    InvalidQuotient { index: usize },
    #[error("a periodic expansion needs a nonempty period")]
    EmptyPeriod,
}

/// Sign of an element of `Z + θZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn of(v: &BigInt) -> Sign {
        if v.is_negative() {
            Sign::Negative
        } else if v.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }
}

struct StreamState {
    provider: Box<dyn Iterator<Item = u64> + Send>,
    cache: Vec<u64>,
}

enum Source {
    Periodic {
        preperiod: Vec<u64>,
        period: Vec<u64>,
    },
    InvE,
    Stream(Mutex<StreamState>),
}

/// An irrational `θ = [0; a1, a2, ...]`.
pub struct CfNumber {
    source: Source,
    budget: Option<usize>,
    deepest: AtomicUsize,
}

impl fmt::Debug for CfNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Periodic { preperiod, period } => f
                .debug_struct("CfNumber::Periodic")
                .field("preperiod", preperiod)
                .field("period", period)
                .finish(),
            Source::InvE => f.write_str("CfNumber::InvE"),
            Source::Stream(_) => f
                .debug_struct("CfNumber::Stream")
                .field("budget", &self.budget)
                .finish(),
        }
    }
}

/// `p_k / q_k`, the k-th convergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

impl CfNumber {
    /// `[0; preperiod, period, period, ...]`.
    pub fn periodic(preperiod: Vec<u64>, period: Vec<u64>) -> Result<CfNumber, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        if let Some(i) = preperiod.iter().chain(&period).position(|&a| a == 0) {
            return Err(CfError::InvalidQuotient { index: i + 1 });
        }
        Ok(CfNumber::from_source(
            Source::Periodic { preperiod, period },
            None,
        ))
    }

    /// `(√5 - 1) / 2`
    pub fn golden() -> CfNumber {
        CfNumber::periodic(vec![], vec![1]).expect("valid")
    }

    /// `√2 - 1`
    pub fn sqrt2_minus_1() -> CfNumber {
        CfNumber::periodic(vec![], vec![2]).expect("valid")
    }

    /// `1/e = [0; 2, 1, 2, 1, 1, 4, 1, 1, 6, ...]`.
    pub fn inv_e() -> CfNumber {
        CfNumber::from_source(Source::InvE, None)
    }

    /// Quotients `a1, a2, ...` supplied on demand; at most `budget` of them
    /// are ever requested.
    pub fn stream<I>(quotients: I, budget: usize) -> CfNumber
    where
        I: IntoIterator<Item = u64>,
        I::IntoIter: Send + 'static,
    {
        CfNumber::from_source(
            Source::Stream(Mutex::new(StreamState {
                provider: Box::new(quotients.into_iter()),
                cache: Vec::new(),
            })),
            Some(budget),
        )
    }

    /// A finite list of quotients `a1..an` with budget `n`.
    pub fn from_quotients(quotients: Vec<u64>) -> CfNumber {
        let n = quotients.len();
        CfNumber::stream(quotients, n)
    }

    /// Caps the number of partial quotients any decision may consult.
    /// Periodic expansions ignore the cap.
    pub fn with_budget(mut self, budget: usize) -> CfNumber {
        if !matches!(self.source, Source::Periodic { .. }) {
            self.budget = Some(self.budget.map_or(budget, |b| b.min(budget)));
        }
        self
    }

    fn from_source(source: Source, budget: Option<usize>) -> CfNumber {
        CfNumber {
            source,
            budget,
            deepest: AtomicUsize::new(0),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.source, Source::Periodic { .. })
    }

    /// `(preperiod, period)` for periodic expansions.
    pub fn period(&self) -> Option<(&[u64], &[u64])> {
        match &self.source {
            Source::Periodic { preperiod, period } => Some((preperiod, period)),
            _ => None,
        }
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    /// Deepest partial-quotient index consulted so far by any query.
    pub fn quotients_read(&self) -> usize {
        self.deepest.load(AtomicOrdering::Relaxed)
    }

    /// `a_k`, with `a_0 = 0`.
    pub fn partial_quotient(&self, k: usize) -> Result<u64, CfError> {
        if k == 0 {
            return Ok(0);
        }
        if let Some(budget) = self.budget {
            if k > budget {
                return Err(CfError::StreamExhausted { index: k, budget });
            }
        }
        self.deepest.fetch_max(k, AtomicOrdering::Relaxed);
        match &self.source {
            Source::Periodic { preperiod, period } => Ok(if k <= preperiod.len() {
                preperiod[k - 1]
            } else {
                period[(k - 1 - preperiod.len()) % period.len()]
            }),
            Source::InvE => Ok(inv_e_quotient(k)),
            Source::Stream(state) => {
                let mut st = state.lock().expect("stream cache poisoned");
                while st.cache.len() < k {
                    let idx = st.cache.len() + 1;
                    match st.provider.next() {
                        Some(0) => return Err(CfError::InvalidQuotient { index: idx }),
                        Some(a) => st.cache.push(a),
                        None => {
                            return Err(CfError::StreamExhausted {
                                index: idx,
                                budget: idx - 1,
                            })
                        }
                    }
                }
                Ok(st.cache[k - 1])
            }
        }
    }

    /// Convergents `p_0/q_0 ..= p_k/q_k`.
    pub fn convergents(&self, k: usize) -> Result<Vec<Convergent>, CfError> {
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (BigInt::zero(), BigInt::one());
        let mut out = vec![Convergent {
            p: p.clone(),
            q: q.clone(),
            index: 0,
        }];
        for i in 1..=k {
            let a = BigInt::from(self.partial_quotient(i)?);
            let p_next = &a * &p + &p_prev;
            let q_next = &a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push(Convergent {
                p: p.clone(),
                q: q.clone(),
                index: i,
            });
        }
        Ok(out)
    }

    /// Strict order of `θ` against a rational; never `Equal`.
    pub fn compare_rational(&self, r: &BigRational) -> Result<Ordering, CfError> {
        self.compare_rational_counted(r).map(|(o, _)| o)
    }

    /// Like [`compare_rational`](Self::compare_rational), also returning the
    /// deepest partial-quotient index consulted.
    pub fn compare_rational_counted(&self, r: &BigRational) -> Result<(Ordering, usize), CfError> {
        let digits = rational_cf(r);
        let mut i = 0;
        loop {
            let Some(c) = digits.get(i) else {
                // the rational's expansion ended: treat its next digit as +∞
                let ord = if i % 2 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                // one more digit of θ must exist for θ to be irrational
                self.partial_quotient(i)?;
                return Ok((ord, i));
            };
            let t = BigInt::from(self.partial_quotient(i)?);
            match t.cmp(c) {
                Ordering::Equal => i += 1,
                ord => return Ok((if i % 2 == 0 { ord } else { ord.reverse() }, i)),
            }
        }
    }

    /// Sign of `a + bθ`.
    pub fn sign_a_plus_b_theta(&self, a: &BigInt, b: &BigInt) -> Result<Sign, CfError> {
        self.sign_a_plus_b_theta_counted(a, b).map(|(s, _)| s)
    }

    pub fn sign_a_plus_b_theta_counted(
        &self,
        a: &BigInt,
        b: &BigInt,
    ) -> Result<(Sign, usize), CfError> {
        if b.is_zero() {
            return Ok((Sign::of(a), 0));
        }
        // a + bθ = b (θ - r) with r = -a/b
        let r = BigRational::new(-a, b.clone());
        let (ord, used) = if !r.is_positive() {
            (Ordering::Greater, 0)
        } else if r >= BigRational::one() {
            (Ordering::Less, 0)
        } else {
            self.compare_rational_counted(&r)?
        };
        let s = match ord {
            Ordering::Greater => Sign::Positive,
            _ => Sign::Negative,
        };
        Ok((if b.is_negative() { s.flip() } else { s }, used))
    }
}

fn inv_e_quotient(k: usize) -> u64 {
    // 1/e = [0; 2, e_1, e_2, ...] where e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    if k == 1 {
        return 2;
    }
    let j = k - 1;
    if j % 3 == 2 {
        (2 * (j + 1) / 3) as u64
    } else {
        1
    }
}

/// Finite expansion of a rational by Euclid; the last quotient is at least
/// 2 unless the expansion has a single term.
fn rational_cf(r: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    loop {
        let (a, rem) = num.div_mod_floor(&den);
        out.push(a);
        if rem.is_zero() {
            return out;
        }
        num = std::mem::replace(&mut den, rem);
    }
}

/// Periodic expansion of `θ = (P + √D) / Q`.
pub fn cf_from_surd(
    p: impl Into<BigInt>,
    d: impl Into<BigInt>,
    q: impl Into<BigInt>,
) -> Result<CfNumber, CfError> {
    let (mut p, mut d, mut q) = (p.into(), d.into(), q.into());
    if q.is_zero() {
        return Err(CfError::InvalidSurd("Q must be nonzero".into()));
    }
    if !d.is_positive() {
        return Err(CfError::InvalidSurd("D must be positive".into()));
    }
    let s = d.sqrt();
    if &s * &s == d {
        return Err(CfError::DIsPerfectSquare(d));
    }
    if !(&d - &p * &p).is_multiple_of(&q) {
        let qa = q.abs();
        p *= &qa;
        d *= &q * &q;
        q *= &qa;
    }
    let s = d.sqrt();
    let floor_of = |p: &BigInt, q: &BigInt| -> BigInt {
        if q.is_positive() {
            (p + &s).div_floor(q)
        } else {
            (p + &s + BigInt::one()).div_floor(q)
        }
    };
    if !floor_of(&p, &q).is_zero() {
        return Err(CfError::ThetaOutOfRange);
    }
    let mut states: Vec<(BigInt, BigInt)> = Vec::new();
    let mut quotients: Vec<u64> = Vec::new();
    let mut a = BigInt::zero();
    loop {
        let p_next = &a * &q - &p;
        let q_next = (&d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
        if let Some(start) = states.iter().position(|st| st.0 == p && st.1 == q) {
            let period = quotients.split_off(start);
            return CfNumber::periodic(quotients, period);
        }
        states.push((p.clone(), q.clone()));
        a = floor_of(&p, &q);
        let digit = u64::try_from(&a)
            .map_err(|_| CfError::InvalidSurd("partial quotient exceeds u64".into()))?;
        quotients.push(digit);
    }
}
