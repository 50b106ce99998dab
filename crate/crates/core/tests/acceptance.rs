//! Acceptance criteria 1-9. Runs as a plain binary so each criterion prints
//! its own PASS/FAIL line; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    eval_at_rational, eval_scaled, grid, oracle_sign, random_element, random_rational_point,
    random_term, rng, theta_interval, theta_named,
};
use mvdecide::cf::{CfNumber, Sign};
use mvdecide::decide::{Engine, ProblemId, Witness};
use mvdecide::gamma::{Assignment, Backend, ChainEvaluator, GammaElement};
use mvdecide::pwl::{interpret_free, PwlComplex, ZeroTest, DEFAULT_CELL_BUDGET};
use mvdecide::term::{
    parse, reduce_central, reduce_eccentricity, reduce_order, reduce_rho, reduce_word, Term,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ProblemId::*;

struct Outcome {
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Best of three wall-clock runs.
fn timed<T>(mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..3 {
        let t = Instant::now();
        let v = f();
        best = best.min(t.elapsed());
        out = Some(v);
    }
    (out.unwrap(), best)
}

// ---------------------------------------------------------------- 1

fn free_axioms(o: &mut Outcome, r: &mut ChaCha8Rng, n: usize) {
    let b = DEFAULT_CELL_BUDGET;
    let el = |r: &mut ChaCha8Rng| interpret_free(&random_term(r, n as u32, 12), n).unwrap();
    let eq = |f: &PwlComplex, g: &PwlComplex| f.compare(g).unwrap().equal();
    let zero = PwlComplex::constant(false, n);
    let one = zero.neg();
    for _ in 0..1000 {
        let (x, y, z) = (el(r), el(r), el(r));
        let op = |f: &PwlComplex, g: &PwlComplex| f.oplus(g, b).unwrap();
        let luk_l = op(&op(&x.neg(), &y).neg(), &y);
        let luk_r = op(&op(&y.neg(), &x).neg(), &x);
        let minus = op(&x.neg(), &y).neg();
        o.check(eq(&x.neg().neg(), &x), || format!("Free({n}): x** = x"));
        o.check(eq(&op(&one, &x), &one), || format!("Free({n}): 0*+x = 0*"));
        o.check(eq(&luk_l, &luk_r), || {
            format!("Free({n}): Lukasiewicz axiom")
        });
        o.check(eq(&op(&x, &y), &op(&y, &x)), || {
            format!("Free({n}): commutativity")
        });
        o.check(eq(&op(&x, &op(&y, &z)), &op(&op(&x, &y), &z)), || {
            format!("Free({n}): associativity")
        });
        o.check(eq(&op(&x, &zero), &x), || format!("Free({n}): x+0 = x"));
        o.check(
            x.compare(&y).unwrap().le == minus.is_zero().is_zero(),
            || format!("Free({n}): order"),
        );
    }
}

fn chain_axioms(o: &mut Outcome, r: &mut ChaCha8Rng, b: &Backend) {
    let zero = b.zero().unwrap();
    let one = b.neg(&zero).unwrap();
    for _ in 0..1000 {
        let (x, y, z) = (
            random_element(r, b),
            random_element(r, b),
            random_element(r, b),
        );
        let op = |p: &GammaElement, q: &GammaElement| b.oplus(p, q).unwrap();
        let ng = |p: &GammaElement| b.neg(p).unwrap();
        o.check(ng(&ng(&x)) == x, || format!("{b}: x** = x"));
        o.check(op(&one, &x) == one, || format!("{b}: 0*+x = 0*"));
        o.check(
            op(&ng(&op(&ng(&x), &y)), &y) == op(&ng(&op(&ng(&y), &x)), &x),
            || format!("{b}: Lukasiewicz"),
        );
        o.check(op(&x, &y) == op(&y, &x), || format!("{b}: commutativity"));
        o.check(op(&x, &op(&y, &z)) == op(&op(&x, &y), &z), || {
            format!("{b}: associativity")
        });
        o.check(op(&x, &zero) == x, || format!("{b}: x+0 = x"));
        o.check(
            b.leq(&x, &y).unwrap() == b.is_zero(&b.minus(&x, &y).unwrap()).unwrap(),
            || format!("{b}: order"),
        );
    }
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(101);
    let start = Instant::now();
    free_axioms(&mut o, &mut r, 1);
    free_axioms(&mut o, &mut r, 2);
    let mut backends: Vec<Backend> = (2..=8).map(|k| Backend::chain(k).unwrap()).collect();
    backends.push(Backend::effros_shen(CfNumber::golden()));
    backends.push(Backend::effros_shen(CfNumber::inv_e()));
    backends.push(Backend::behncke_leptin(2, 3).unwrap());
    for b in &backends {
        chain_axioms(&mut o, &mut r, b);
    }
    let t = start.elapsed();
    o.check(t < Duration::from_secs(60), || {
        format!("took {:.1} s", secs(t))
    });
    o.note = format!(
        "{} backends x 1000 triples, {:.2} s",
        backends.len() + 2,
        secs(t)
    );
    o
}

// ---------------------------------------------------------------- 2

const COHERENCE: [(ProblemId, ProblemId); 6] =
    [(P1, P4), (P2, P4), (P3, P4), (P4, P2), (P4, P1), (P4, P3)];

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(102);
    let start = Instant::now();
    let chain = Backend::chain(5).unwrap();
    let farey = Engine::new(Backend::farey());
    for &(from, to) in &COHERENCE {
        for _ in 0..500 {
            let asg = Assignment::new()
                .with(1, GammaElement::Chain(r.gen_range(0..=5)))
                .with(2, GammaElement::Chain(r.gen_range(0..=5)));
            let e = Engine::new(chain.clone()).with_assignment(asg);
            let inst: Vec<Term> = (0..from.arity())
                .map(|_| random_term(&mut r, 2, 40))
                .collect();
            let direct = e.decide(from, &inst).unwrap().answer;
            let via = e.decide_by_reduction_path(from, &inst, to).unwrap().answer;
            o.check(direct == via, || {
                format!("Chain(5) {from}->{to} on {inst:?}")
            });

            let inst: Vec<Term> = (0..from.arity())
                .map(|_| random_term(&mut r, 1, 40))
                .collect();
            let direct = farey.decide(from, &inst).unwrap().answer;
            let via = farey
                .decide_by_reduction_path(from, &inst, to)
                .unwrap()
                .answer;
            o.check(direct == via, || {
                format!("Free(1) {from}->{to} on {inst:?}")
            });
        }
    }
    let t = start.elapsed();
    o.check(t < Duration::from_secs(60), || {
        format!("took {:.1} s", secs(t))
    });
    o.note = format!("6 pairs x 500 x 2 backends, {:.2} s", secs(t));
    o
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(103);
    let start = Instant::now();
    let golden = Backend::effros_shen(CfNumber::golden());
    let bl = Backend::behncke_leptin(2, 3).unwrap();
    let bl_asg = Assignment::new().with(
        1,
        GammaElement::BehnckeLeptin {
            a: 1.into(),
            b: 0.into(),
        },
    );
    let mut zeros = 0;
    for (b, asg) in [(&golden, Assignment::new()), (&bl, bl_asg)] {
        let e = Engine::new(b.clone()).with_assignment(asg.clone());
        for _ in 0..200 {
            let phi = random_term(&mut r, 1, 60);
            let mut ev = ChainEvaluator::new(b, &asg).unwrap();
            let is_zero = b.is_zero(&ev.eval(&phi).unwrap()).unwrap();
            let rho = ev.eval(&reduce_rho(&phi, 1).unwrap()).unwrap();
            let trivial = b.is_zero(&rho).unwrap() || b.is_unit(&rho).unwrap();
            o.check(is_zero == trivial, || format!("{b}: {phi}"));
            let via = e
                .decide_by_reduction_path(P4, &[phi.clone()], P5)
                .unwrap()
                .answer;
            o.check(via == is_zero, || format!("{b}: path P4->P5 on {phi}"));
            zeros += is_zero as usize;
        }
    }
    let t = start.elapsed();
    o.check(t < Duration::from_secs(30), || {
        format!("took {:.1} s", secs(t))
    });
    o.note = format!("400 terms ({zeros} zero), {:.2} s", secs(t));
    o
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for k in 1..=6u64 {
        let b = Backend::chain(k).unwrap();
        let elems: Vec<GammaElement> = (0..=k).map(GammaElement::Chain).collect();
        for x in &elems {
            let boolean = b.is_boolean(x).unwrap();
            let meet_zero = b.is_zero(&b.meet(x, &b.neg(x).unwrap()).unwrap()).unwrap();
            let minimal = !elems
                .iter()
                .any(|y| b.eccentricity_leq(y, x).unwrap() && !b.eccentricity_leq(x, y).unwrap());
            o.check(boolean == meet_zero && meet_zero == minimal, || {
                format!("Chain({k}) at {x}")
            });
        }
    }
    let mut r = rng(104);
    let backends = [
        Backend::chain(7).unwrap(),
        Backend::chain(8).unwrap(),
        Backend::effros_shen(CfNumber::golden()),
        Backend::effros_shen(CfNumber::sqrt2_minus_1()),
        Backend::effros_shen(CfNumber::inv_e()),
        Backend::behncke_leptin(2, 3).unwrap(),
    ];
    for b in &backends {
        for _ in 0..1000 {
            let x = random_element(&mut r, b);
            let endpoint = b.is_zero(&x).unwrap() || b.is_unit(&x).unwrap();
            o.check(b.is_boolean(&x).unwrap() == endpoint, || {
                format!("{b} at {x}")
            });
        }
    }
    o.note = "Chain(1..6) enumerated; 6 backends x 1000 elements".into();
    o
}

// ---------------------------------------------------------------- 5

fn farey_reduced(p: ProblemId, inst: &[Term]) -> Vec<Term> {
    match p {
        P1 => vec![reduce_word(&inst[0], &inst[1])],
        P2 => vec![reduce_order(&inst[0], &inst[1])],
        P3 => vec![reduce_eccentricity(&inst[0], &inst[1])],
        P4 => vec![inst[0].clone()],
        P5 => vec![reduce_central(&inst[0])],
        P6 => vec![inst[0].clone()],
        P7 => vec![reduce_central(&inst[0]), inst[0].clone()],
    }
}

/// Truth of `p` on the Farey algebra from every rational of denominator
/// at most `d`, using the integer evaluator.
fn farey_grid_truth(p: ProblemId, inst: &[Term], d: i64) -> bool {
    let pts = grid(1, d);
    let v = |t: &Term, x: i64, q: i64| eval_scaled(t, &[x], q);
    let all = |f: &dyn Fn(i64, i64) -> bool| pts.iter().all(|(x, q)| f(x[0], *q));
    let any = |f: &dyn Fn(i64, i64) -> bool| pts.iter().any(|(x, q)| f(x[0], *q));
    match p {
        P1 => all(&|x, q| v(&inst[0], x, q) == v(&inst[1], x, q)),
        P2 => all(&|x, q| v(&inst[0], x, q) <= v(&inst[1], x, q)),
        P3 => all(&|x, q| {
            let (a, b) = (v(&inst[0], x, q), v(&inst[1], x, q));
            (b >= q - b || a <= b) && (b <= q - b || a >= b)
        }),
        P4 => all(&|x, q| v(&inst[0], x, q) == 0),
        P5 => all(&|x, q| {
            let a = v(&inst[0], x, q);
            a == 0 || a == q
        }),
        P6 => any(&|x, q| v(&inst[0], x, q) != 0) && any(&|x, q| v(&inst[0], x, q) != q),
        P7 => farey_grid_truth(P5, inst, d) && farey_grid_truth(P6, inst, d),
    }
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(105);
    let e = Engine::new(Backend::farey());
    let mut worst = Duration::ZERO;
    let mut max_den = 0i64;
    for _ in 0..200 {
        let phi = random_term(&mut r, 1, 200);
        let psi = random_term(&mut r, 1, 200);
        for p in ProblemId::ALL {
            let inst = if p.arity() == 2 {
                vec![phi.clone(), psi.clone()]
            } else {
                vec![phi.clone()]
            };
            let (v, t) = timed(|| e.decide(p, &inst).unwrap());
            worst = worst.max(t);
            o.check(t < Duration::from_millis(50), || {
                format!("{p} took {:.1} ms", t.as_secs_f64() * 1e3)
            });
            let d = farey_reduced(p, &inst)
                .iter()
                .map(|t| {
                    interpret_free(t, 1)
                        .unwrap()
                        .max_vertex_denominator()
                        .to_i64()
                        .unwrap()
                })
                .max()
                .unwrap();
            max_den = max_den.max(d);
            o.check(v.answer == farey_grid_truth(p, &inst, d), || {
                format!("{p} on {inst:?}")
            });
        }
    }
    o.note = format!(
        "1400 decisions, slowest {:.2} ms, largest breakpoint denominator {max_den}",
        worst.as_secs_f64() * 1e3
    );
    o
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(106);
    let start = Instant::now();
    let pts = grid(2, 8);
    let (mut yes, mut no) = (0, 0);
    for i in 0..100 {
        let t = loop {
            let t = match i % 3 {
                0 => random_term(&mut r, 2, 30),
                1 => {
                    // a ⊖ (a ∨ b) vanishes identically
                    let a = random_term(&mut r, 2, 6);
                    let b = random_term(&mut r, 2, 5);
                    a.clone().minus(a.join(b))
                }
                _ => {
                    // (a ∧ b) ⊖ a, or a perturbed copy that usually does not vanish
                    let a = random_term(&mut r, 2, 5);
                    let b = random_term(&mut r, 2, 3);
                    if r.gen_bool(0.5) {
                        a.clone().meet(b).minus(a)
                    } else {
                        a.clone().join(b).minus(a)
                    }
                }
            };
            if t.size().value() <= 30 {
                break t;
            }
        };
        let f = interpret_free(&t, 2).unwrap();
        let refuted = pts.iter().any(|(x, q)| eval_scaled(&t, x, *q) != 0);
        match f.is_zero() {
            ZeroTest::Zero => {
                yes += 1;
                o.check(!refuted, || format!("grid refutes {t}"));
                for _ in 0..10_000 {
                    let p = random_rational_point(&mut r, 2, 1_000_000);
                    if !eval_at_rational(&t, &p).is_zero() {
                        o.check(false, || format!("sample refutes {t}"));
                        break;
                    }
                }
            }
            ZeroTest::NonZero { point, value } => {
                no += 1;
                o.check(
                    !value.is_zero() && eval_at_rational(&t, &point) == value,
                    || format!("bad witness for {t}"),
                );
            }
        }
    }
    let t = start.elapsed();
    o.check(t < Duration::from_secs(120), || {
        format!("took {:.1} s", secs(t))
    });
    o.note = format!("{yes} zero / {no} nonzero terms, {:.2} s", secs(t));
    o
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(107);
    let mut deepest = 0;
    for name in ["golden", "sqrt2-1", "inv-e"] {
        let theta = theta_named(name);
        let iv = theta_interval(name);
        for _ in 0..100 {
            let a = BigInt::from(r.gen_range(-1_000_000i64..=1_000_000));
            let b = BigInt::from(r.gen_range(-1_000_000i64..=1_000_000));
            let (s, used) = theta.sign_a_plus_b_theta_counted(&a, &b).unwrap();
            let got = match s {
                Sign::Negative => std::cmp::Ordering::Less,
                Sign::Zero => std::cmp::Ordering::Equal,
                Sign::Positive => std::cmp::Ordering::Greater,
            };
            o.check(oracle_sign(&a, &b, &iv) == Some(got), || {
                format!("{name}: {a} + {b} theta")
            });
            if theta.is_periodic() {
                deepest = deepest.max(used);
                o.check(used <= 200, || format!("{name}: {used} quotients"));
            }
        }
    }
    o.note = format!("300 signs, at most {deepest} quotients for periodic theta");
    o
}

// ---------------------------------------------------------------- 8

type Lex = (i64, i64);

/// Independent evaluator on `Γ(Z ×lex Z, u)` with tuples.
fn bl_eval(t: &Term, xs: &[Lex], u: Lex) -> Lex {
    match t {
        Term::Zero => (0, 0),
        Term::Var(i) => xs[*i as usize - 1],
        Term::Neg(a) => {
            let v = bl_eval(a, xs, u);
            (u.0 - v.0, u.1 - v.1)
        }
        Term::Oplus(a, b) => {
            let (x, y) = (bl_eval(a, xs, u), bl_eval(b, xs, u));
            (x.0 + y.0, x.1 + y.1).min(u)
        }
    }
}

fn bl_truth(p: ProblemId, inst: &[Term], xs: &[Lex], u: Lex) -> bool {
    let a = bl_eval(&inst[0], xs, u);
    let star = |v: Lex| (u.0 - v.0, u.1 - v.1);
    match p {
        P1 => a == bl_eval(&inst[1], xs, u),
        P2 => a <= bl_eval(&inst[1], xs, u),
        P3 => {
            let b = bl_eval(&inst[1], xs, u);
            (b >= star(b) || a <= b) && (b <= star(b) || a >= b)
        }
        P4 => a == (0, 0),
        P5 => a == (0, 0) || a == u,
        P6 => a != (0, 0) && a != u,
        P7 => false,
    }
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(108);
    let b = Backend::behncke_leptin(2, 3).unwrap();
    let u = (2, 3);
    let mut worst = Duration::ZERO;
    let mut central = 0;
    for p in ProblemId::ALL {
        for _ in 0..200 {
            let x1 = random_element(&mut r, &b);
            let x2 = random_element(&mut r, &b);
            let lex = |x: &GammaElement| match x {
                GammaElement::BehnckeLeptin { a, b } => (a.to_i64().unwrap(), b.to_i64().unwrap()),
                _ => unreachable!(),
            };
            let xs = [lex(&x1), lex(&x2)];
            let e =
                Engine::new(b.clone()).with_assignment(Assignment::new().with(1, x1).with(2, x2));
            let inst: Vec<Term> = (0..p.arity()).map(|_| random_term(&mut r, 2, 30)).collect();
            let (v, t) = timed(|| e.decide(p, &inst).unwrap());
            worst = worst.max(t);
            o.check(t < Duration::from_millis(1), || {
                format!("{p} took {:.3} ms", t.as_secs_f64() * 1e3)
            });
            o.check(v.answer == bl_truth(p, &inst, &xs, u), || {
                format!("{p} on {inst:?} at {xs:?}")
            });
            if p == P5 {
                let val = bl_eval(&inst[0], &xs, u);
                o.check(v.answer == (val == (0, 0) || val == u), || {
                    format!("P5 on {}", inst[0])
                });
                central += v.answer as usize;
            }
        }
    }
    o.note = format!(
        "1400 decisions, slowest {:.3} ms, {central}/200 central",
        worst.as_secs_f64() * 1e3
    );
    o
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(109);
    let e = Engine::new(Backend::free(2).unwrap());
    let equations = [
        ("X1**", "X1"),
        ("0* + X1", "0*"),
        ("(X1* + X2)* + X2", "(X2* + X1)* + X1"),
        ("X1 + X2", "X2 + X1"),
        ("X1 + (X2 + X3)", "(X1 + X2) + X3"),
        ("X1 + 0", "X1"),
    ];
    for (l, rt) in equations {
        let (l, rt) = (parse(l).unwrap(), parse(rt).unwrap());
        for _ in 0..50 {
            let subst: Vec<Term> = (0..3).map(|_| random_term(&mut r, 2, 10)).collect();
            let inst = [l.substitute(&subst), rt.substitute(&subst)];
            o.check(e.decide(P1, &inst).unwrap().answer, || {
                format!("{} = {}", inst[0], inst[1])
            });
        }
    }
    let pts = grid(2, 6);
    let mut refuted = 0;
    while refuted < 50 {
        let phi = random_term(&mut r, 2, 16);
        let psi = random_term(&mut r, 2, 16);
        let differs = pts
            .iter()
            .any(|(x, q)| eval_scaled(&phi, x, *q) != eval_scaled(&psi, x, *q));
        if !differs {
            continue;
        }
        refuted += 1;
        let v = e.decide(P1, &[phi.clone(), psi.clone()]).unwrap();
        let ok = match v.witness() {
            Some(Witness::Point { coords, value }) if !v.answer => {
                let d = eval_at_rational(&reduce_word(&phi, &psi), coords);
                d == *value
                    && !value.is_zero()
                    && eval_at_rational(&phi, coords) != eval_at_rational(&psi, coords)
            }
            _ => false,
        };
        o.check(ok, || format!("{phi} vs {psi}"));
    }
    o.note = "6 equations x 50 substitutions; 50 non-identities refuted".into();
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("MV axioms on every backend", criterion_1),
        ("reduction coherence", criterion_2),
        ("rho equivalence", criterion_3),
        ("central elements", criterion_4),
        ("Farey polytime behaviour", criterion_5),
        ("Free(2) exactness", criterion_6),
        ("Effros-Shen exact order", criterion_7),
        ("Behncke-Leptin suite", criterion_8),
        ("tautology spot checks", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if o.failures.is_empty() {
            println!("criterion {}: PASS  {name} ({})", i + 1, o.note);
        } else {
            failed += 1;
            println!(
                "criterion {}: FAIL  {name} ({}; {} failures)",
                i + 1,
                o.note,
                o.failures.len()
            );
            for f in o.failures.iter().filter(|f| !f.is_empty()) {
                println!("    {f}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
