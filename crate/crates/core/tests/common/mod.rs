//! Shared test helpers: seeded term generators, random backend elements and
//! oracles that do not go through the library's own evaluators.
#![allow(dead_code)]

use std::cmp::Ordering;

use mvdecide::cf::CfNumber;
use mvdecide::gamma::{Backend, GammaElement};
use mvdecide::term::Term;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn leaf(rng: &mut ChaCha8Rng, nvars: u32) -> Term {
    if rng.gen_bool(0.1) {
        Term::zero()
    } else {
        Term::var(rng.gen_range(1..=nvars))
    }
}

fn gen(rng: &mut ChaCha8Rng, nvars: u32, budget: usize) -> Term {
    if budget <= 2 {
        let t = leaf(rng, nvars);
        return if budget == 2 && rng.gen_bool(0.5) {
            t.neg()
        } else {
            t
        };
    }
    let split = |rng: &mut ChaCha8Rng, total: usize| {
        if total < 2 {
            return (1, 1);
        }
        let l = rng.gen_range(1..total);
        (l, total - l)
    };
    match rng.gen_range(0..11) {
        0 | 1 => gen(rng, nvars, budget - 1).neg(),
        10 if budget >= 6 => {
            // k-fold sum, for steeper slopes
            let k = rng.gen_range(2..=4usize);
            let inner = gen(rng, nvars, (budget / k).saturating_sub(3).max(1));
            let mut t = inner.clone();
            for _ in 1..k {
                t = t.oplus(inner.clone());
            }
            t
        }
        2..=4 => {
            let (l, r) = split(rng, budget - 2);
            gen(rng, nvars, l).oplus(gen(rng, nvars, r.max(1)))
        }
        5 | 6 if budget >= 8 => {
            let (l, r) = split(rng, budget - 6);
            gen(rng, nvars, l).times(gen(rng, nvars, r))
        }
        7 if budget >= 7 => {
            let (l, r) = split(rng, budget - 5);
            gen(rng, nvars, l).minus(gen(rng, nvars, r))
        }
        8 if budget >= 10 => {
            let (l, r) = split(rng, budget - 6);
            let r = (r / 2).max(1);
            gen(rng, nvars, l).join(gen(rng, nvars, r))
        }
        9 if budget >= 14 => {
            let (l, r) = split(rng, budget - 10);
            let r = (r / 2).max(1);
            gen(rng, nvars, l).meet(gen(rng, nvars, r))
        }
        _ => {
            let (l, r) = split(rng, budget - 2);
            gen(rng, nvars, l).oplus(gen(rng, nvars, r.max(1)))
        }
    }
}

/// A random term in `X1..X{nvars}` of size at most `max_size`, mixing the
/// primitive and derived connectives.
pub fn random_term(rng: &mut ChaCha8Rng, nvars: u32, max_size: usize) -> Term {
    loop {
        let budget = rng.gen_range(1..=max_size);
        let t = gen(rng, nvars, budget);
        if t.size().value() <= max_size {
            return t;
        }
    }
}

/// Value of `t` at the point `xs / q`, times `q`, using
/// `x ⊕ y = min(q, x + y)` and `x* = q - x` on integers.
pub fn eval_scaled(t: &Term, xs: &[i64], q: i64) -> i64 {
    match t {
        Term::Zero => 0,
        Term::Var(i) => xs[*i as usize - 1],
        Term::Neg(a) => q - eval_scaled(a, xs, q),
        Term::Oplus(a, b) => (eval_scaled(a, xs, q) + eval_scaled(b, xs, q)).min(q),
    }
}

fn eval_big(t: &Term, xs: &[BigInt], q: &BigInt) -> BigInt {
    match t {
        Term::Zero => BigInt::zero(),
        Term::Var(i) => xs[*i as usize - 1].clone(),
        Term::Neg(a) => q - eval_big(a, xs, q),
        Term::Oplus(a, b) => (eval_big(a, xs, q) + eval_big(b, xs, q)).min(q.clone()),
    }
}

/// Exact value of `t` at a rational point of the cube.
pub fn eval_at_rational(t: &Term, point: &[BigRational]) -> BigRational {
    let q = point
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let xs: Vec<BigInt> = point.iter().map(|p| p.numer() * (&q / p.denom())).collect();
    BigRational::new(eval_big(t, &xs, &q), q)
}

/// Every point of `[0,1]^n` with a common denominator `q <= max_den`, as
/// `(numerators, q)`. Points appear once per denominator they admit.
pub fn grid(n: usize, max_den: i64) -> Vec<(Vec<i64>, i64)> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        let mut idx = vec![0i64; n];
        loop {
            let reduced = n != 1 || idx[0].gcd(&q) == 1;
            if reduced {
                out.push((idx.clone(), q));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] <= q {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

pub fn random_rational_point(rng: &mut ChaCha8Rng, n: usize, max_den: i64) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=max_den);
            BigRational::new(rng.gen_range(0..=q).into(), q.into())
        })
        .collect()
}

/// `θ` pinned to an interval of width below `10^-60`.
pub fn theta_interval(name: &str) -> (BigRational, BigRational) {
    let scale = BigInt::from(10u32).pow(60);
    match name {
        "golden" => {
            // (√5 - 1)/2
            let s = (BigInt::from(5) * &scale * &scale).sqrt();
            let two_scale = &scale * BigInt::from(2);
            (
                BigRational::new(&s - &scale, two_scale.clone()),
                BigRational::new(&s + 1 - &scale, two_scale),
            )
        }
        "sqrt2-1" => {
            let s = (BigInt::from(2) * &scale * &scale).sqrt();
            (
                BigRational::new(&s - &scale, scale.clone()),
                BigRational::new(&s + 1 - &scale, scale),
            )
        }
        "inv-e" => {
            // Σ (-1)^k / k!, alternating with error below the next term
            let mut sum = BigRational::zero();
            let mut fact = BigInt::one();
            for k in 0..60u32 {
                if k > 0 {
                    fact *= k;
                }
                let term = BigRational::new(BigInt::one(), fact.clone());
                if k % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            let err = BigRational::new(BigInt::one(), fact * 60u32);
            (&sum - &err, &sum + &err)
        }
        _ => panic!("unknown theta {name}"),
    }
}

pub fn theta_named(name: &str) -> CfNumber {
    match name {
        "golden" => CfNumber::golden(),
        "sqrt2-1" => CfNumber::sqrt2_minus_1(),
        "inv-e" => CfNumber::inv_e(),
        _ => panic!("unknown theta {name}"),
    }
}

/// Sign of `a + bθ` from the interval, `None` if the interval straddles 0.
pub fn oracle_sign(
    a: &BigInt,
    b: &BigInt,
    interval: &(BigRational, BigRational),
) -> Option<Ordering> {
    let a = BigRational::from_integer(a.clone());
    let b = BigRational::from_integer(b.clone());
    let lo = &a + &b * &interval.0;
    let hi = &a + &b * &interval.1;
    let zero = BigRational::zero();
    let s1 = lo.cmp(&zero);
    let s2 = hi.cmp(&zero);
    (s1 == s2).then_some(s1)
}

/// A random element of a chain backend, biased towards the endpoints now
/// and then.
pub fn random_element(rng: &mut ChaCha8Rng, backend: &Backend) -> GammaElement {
    if rng.gen_bool(0.05) {
        return backend.zero().unwrap();
    }
    if rng.gen_bool(0.05) {
        return backend.unit().unwrap();
    }
    match backend {
        Backend::Chain(k) => GammaElement::Chain(rng.gen_range(0..=*k)),
        Backend::BehnckeLeptin { m, .. } => loop {
            let top: i64 = m.try_into().unwrap();
            let a: BigInt = rng.gen_range(0..=top).into();
            let b: BigInt = rng.gen_range(-50i64..=50).into();
            let x = GammaElement::BehnckeLeptin { a, b };
            if let Ok(x) = backend.element(x) {
                return x;
            }
        },
        Backend::EffrosShen(_) => loop {
            // a + bθ with b random and a the integer placing it in (0, 1)
            let b: i64 = rng.gen_range(-1000..=1000);
            let theta = theta_approx(backend);
            let a = (-(b as f64) * theta).ceil() as i64;
            for a in [a, a - 1, a + 1] {
                let x = GammaElement::EffrosShen {
                    a: a.into(),
                    b: b.into(),
                };
                if let Ok(x) = backend.element(x) {
                    return x;
                }
            }
        },
        Backend::Free(_) => panic!("free algebras have no element literals"),
    }
}

fn theta_approx(backend: &Backend) -> f64 {
    let Backend::EffrosShen(theta) = backend else {
        unreachable!()
    };
    let cs = theta.convergents(12).unwrap();
    let last = cs.last().unwrap();
    let p: f64 = last.p.to_string().parse().unwrap();
    let q: f64 = last.q.to_string().parse().unwrap();
    p / q
}
