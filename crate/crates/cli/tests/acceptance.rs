//! Acceptance criteria 1-9. Each criterion prints one line with its verdict
//! and runtime; the test fails if any criterion fails or overruns its budget.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ahcert::corpus::{self, rng};
use ahcert::ideal::{certify_ideal_is_point, depth_for_mesh};
use ahcert::k0::{
    alpha_apply, alpha_composite, alpha_composite_brute_force, beta_apply, beta_recursion, generator_solve,
    lambda_sharp_check, pullback_lambda, total_order_decide, ClopenCombination, PartitionTower, Sign, SplitRule,
};
use ahcert::morphism::{approx_divisibility_witness, DiagonalMorphism};
use ahcert::space::{cylinder_left, cylinder_right, lambda_map, lambda_min_preimage};
use ahcert::trace::{check_scaling, goodearl_ratio_bound, tracelessness_certificate, GoodearlParams};
use ahcert::{DenseSequence, Point, Rational, RationalMeasure, RationalStepFunction, Space};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn pow2(e: usize) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

fn d(num: u128, exp: u32) -> Point {
    Point::dyadic(num, exp).unwrap()
}

/// `lambda` straight from the digit expansion: a 2 in ternary position `p`
/// becomes a 1 in binary position `p`, and an all-2 tail from `p` on sums to
/// `2^{-(p-1)}`.
fn lambda_oracle(x: &Point) -> Rational {
    let t = x.as_ternary().expect("Cantor point");
    let mut value: Rational = t.positions().iter().map(|&p| Rational::new(BigInt::one(), BigInt::one() << p)).sum();
    if let Some(p) = t.tail() {
        value += Rational::new(BigInt::one(), BigInt::one() << (p - 1));
    }
    value
}

/// Criterion 1: slot lists against the subset maxima, and functoriality.
fn morphism_oracle() -> Outcome {
    let mut r = rng(1);
    let mut slots_checked = 0usize;
    for case in 0..1000 {
        let space = if case % 2 == 0 { Space::Interval } else { Space::Cantor };
        let len = r.gen_range(1..20);
        let seq = corpus::sequence(&mut r, space, len, 10);
        let n = r.gen_range(1..4);
        let k = r.gen_range(0..=12);
        let phi = DiagonalMorphism::canonical(&seq, n, n + k).map_err(|e| e.to_string())?;
        let window: Vec<Point> = (n..n + k).map(|j| seq.point(j)).collect();
        let mut oracle: Vec<Point> = (0..1usize << k)
            .map(|mask| {
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| window[i]).fold(space.min_point(), |a, b| a.max(b))
            })
            .collect();
        let mut slots = phi.slots().to_vec();
        oracle.sort();
        slots.sort();
        ensure(slots == oracle, || format!("case {case}: slot multiset differs from subset maxima"))?;
        slots_checked += slots.len();

        let a = r.gen_range(0..=k);
        let inner = DiagonalMorphism::canonical(&seq, n, n + a).unwrap();
        let outer = DiagonalMorphism::canonical(&seq, n + a, n + k).unwrap();
        let composed = outer.compose(&inner).map_err(|e| e.to_string())?;
        ensure(composed == phi, || format!("case {case}: phi_(m,l) o phi_(l,n) != phi_(m,n)"))?;
        if n + k <= 7 {
            let f = corpus::step_function(&mut r, space, 1 << n, 3, 8, 3);
            let two_steps = outer.apply(&inner.apply(&f).unwrap()).unwrap();
            ensure(two_steps == phi.apply(&f).unwrap(), || format!("case {case}: applied maps differ"))?;
        }
    }
    Ok(format!("1000 sequences, {slots_checked} slots"))
}

/// Mesh cell `i` of the given level as `(lower, upper, upper_closed)`.
fn cell(space: Space, level: u32, i: u128) -> (Point, Point, bool) {
    match space {
        Space::Interval => (d(i, level), d(i + 1, level), i + 1 == 1 << level),
        Space::Cantor => (cylinder_left(level, i), cylinder_right(level, i), true),
    }
}

fn meets((lower, upper, closed): &(Point, Point, bool), a: &Point, b: &Point) -> bool {
    (if *closed { a <= upper } else { a < upper }) && b >= lower
}

/// Criterion 2: ideal certification at mesh `2^{-10}`.
fn ideal_certification() -> Outcome {
    const MESH: u32 = 10;
    let mut depths = Vec::new();
    for space in [Space::Interval, Space::Cantor] {
        let seq = DenseSequence::canonical(space);
        let k = depth_for_mesh(&seq, 1, MESH, 100_000).map_err(|e| e.to_string())?;
        depths.push(k);
        for seed in 0..100 {
            let initial = corpus::zero_set(&mut rng(seed), space, 8);
            let cert = certify_ideal_is_point(&seq, &initial, 1, k, MESH).map_err(|e| e.to_string())?;
            let cut = initial.min();
            ensure(cert.cut == cut, || format!("{space:?} seed {seed}: cut moved"))?;
            ensure(cert.stages.iter().all(|s| s.min == cut), || format!("{space:?} seed {seed}: stage minima vary"))?;
            ensure(cert.certified(), || format!("{space:?} seed {seed}: mesh cells missing"))?;
            let mut last = cert.stages.last().and_then(|s| s.intervals.clone()).ok_or("last stage not listed")?;
            last.sort();
            // Cells ascend and the intervals are sorted, so one sweep suffices.
            let mut next = 0;
            for i in 0..1u128 << MESH {
                let c = cell(space, MESH, i);
                while next < last.len() && last[next].1 < c.0 {
                    next += 1;
                }
                let required = meets(&c, &cut, &space.max_point());
                let covered = last[next..].iter().take(2).any(|(a, b)| meets(&c, a, b));
                ensure(!required || covered, || format!("{space:?} seed {seed}: cell {i} uncovered"))?;
            }
            for j in 1..=k {
                let t = seq.point(j);
                if t >= cut {
                    ensure(last.iter().any(|(a, b)| *a <= t && t <= *b), || {
                        format!("{space:?} seed {seed}: t_{j} >= cut is not in T_1")
                    })?;
                }
            }
        }
    }
    Ok(format!("200 zero sets, stage depths {depths:?}"))
}

fn random_measure(seed: u64) -> RationalMeasure {
    let mut r = rng(seed);
    let atoms: Vec<(Point, Rational)> = (0..r.gen_range(1..10))
        .map(|_| (corpus::point(&mut r, Space::Interval, 10), q(r.gen_range(1..50), r.gen_range(1..7))))
        .collect();
    RationalMeasure::from_atoms(Space::Interval, atoms).unwrap()
}

/// Criterion 3: the tracelessness bound and the scaling identity.
fn tracelessness() -> Outcome {
    let seq = DenseSequence::CanonicalDyadic;
    let (s, r) = (d(1, 2), d(1, 1));
    let eps = q(1, 1024);
    let cert = tracelessness_certificate(&seq, 1, &s, &r, &eps, 100_000).map_err(|e| e.to_string())?;
    let (sq, rq) = (q(1, 4), q(1, 2));
    let hit = |j: usize| {
        let t = seq.point(j).to_rational();
        sq < t && t <= rq
    };
    let hits: Vec<usize> = (1..1 + cert.k).filter(|&j| hit(j)).collect();
    ensure(hits == cert.hits, || format!("hit list {:?} != {hits:?}", cert.hits))?;
    ensure(cert.bound == Rational::one() / pow2(hits.len()), || "bound is not 2^-hits".into())?;
    ensure(cert.bound <= eps, || "bound above epsilon".into())?;
    ensure(cert.k > 0 && hit(cert.k), || "k is not the first index reaching the bound".into())?;

    for seed in 0..20u64 {
        let sample = random_measure(seed);
        let k = cert.k;
        let check = check_scaling(&seq, 1, k, &s, &r, &sample).map_err(|e| e.to_string())?;
        let z = (1..1 + k).filter(|&j| seq.point(j).to_rational() <= rq).count();
        let y = (1..1 + k).filter(|&j| seq.point(j).to_rational() <= sq).count();
        ensure(check.holds() && check.z == z && check.y == y, || format!("seed {seed}: scaling at k = {k}"))?;
        let top = sample.recursion(&seq, 1, k).unwrap();
        ensure(top.mass_up_to(&r) == pow2(z) * sample.mass_up_to(&r), || format!("seed {seed}: factor at r"))?;
        // Short windows against the subset-sum pushforward.
        let short = (seed as usize % 12) + 1;
        let brute = sample.recursion_brute_force(&seq, 1, short).unwrap();
        let z = (1..1 + short).filter(|&j| seq.point(j).to_rational() <= rq).count();
        ensure(brute.mass_up_to(&r) == pow2(z) * sample.mass_up_to(&r), || format!("seed {seed}: brute factor"))?;
        ensure(brute == sample.recursion(&seq, 1, short).unwrap(), || format!("seed {seed}: recursion"))?;
    }
    Ok(format!("k = {}, {} hits, bound 1/{}", cert.k, hits.len(), 1u64 << hits.len()))
}

/// Criterion 4: the Goodearl dichotomy.
fn goodearl() -> Outcome {
    const N: usize = 10_000;
    let (s, r) = (d(1, 2), d(1, 1));
    let every = DenseSequence::explicit(vec![d(3, 3)]).unwrap();
    let mut product = Rational::one();
    let mut previous = Rational::one();
    let half = q(1, 2);
    for n in 1..=N {
        let l = (n * n + 2 * n) as i64;
        product *= q(l, l + 1);
        let closed = Rational::new(BigInt::from(n + 2), BigInt::from(2 * (n + 1)));
        ensure(product == closed, || format!("telescoping fails at N = {n}"))?;
        ensure(closed < previous && closed >= half, || format!("not monotone above 1/2 at N = {n}"))?;
        previous = closed.clone();
        if n <= 200 || n % 97 == 0 || n == N {
            let bound = goodearl_ratio_bound(&GoodearlParams::Quadratic, &every, &s, &r, n).map_err(|e| e.to_string())?;
            ensure(bound == closed, || format!("bound at N = {n} is not (N+2)/(2(N+1))"))?;
        }
    }

    let seq = DenseSequence::CanonicalDyadic;
    let (sq, rq) = (q(1, 4), q(1, 2));
    let mut hits = 0;
    for depth in 0..=2000 {
        if depth > 0 {
            let t = seq.point(depth).to_rational();
            if sq < t && t <= rq {
                hits += 1;
            }
        }
        if depth % 50 == 0 {
            let bound = goodearl_ratio_bound(&GoodearlParams::Constant(1), &seq, &s, &r, depth).unwrap();
            ensure(bound == Rational::one() / pow2(hits), || format!("l = 1 bound at depth {depth}"))?;
        }
    }
    Ok(format!("quadratic exact for N <= {N}; l = 1 gives 2^-{hits} at depth 2000"))
}

/// Sup over `t` of `|h(t) - h(max(t, s1))|_F^2`, read off the pieces.
fn defect(h: &RationalStepFunction, s1: &Point) -> Rational {
    let at_s1 = h.evaluate(s1).unwrap();
    h.pieces()
        .iter()
        .filter(|(start, _)| start < s1)
        .map(|(_, v)| at_s1.sub(v).unwrap().frobenius_sq())
        .fold(Rational::zero(), |a, b| a.max(b))
}

/// Criterion 5: approximate divisibility.
fn approximate_divisibility() -> Outcome {
    let seq = DenseSequence::CanonicalDyadic;
    let mut r = rng(5);
    let functions: Vec<RationalStepFunction> =
        (0..5).map(|_| corpus::step_function(&mut r, Space::Interval, 2, 6, 10, 4)).collect();
    let mut ks = Vec::new();
    for eps in [q(1, 2), q(1, 10)] {
        let w = approx_divisibility_witness(&seq, 1, &functions, &eps, 100_000).map_err(|e| e.to_string())?;
        ensure(w.certified(), || format!("eps = {eps}: defects exceed eps^2"))?;
        ks.push(w.k);
        let s1 = *w.first_threshold();
        let window: Vec<Point> = (1..1 + w.k).map(|j| seq.point(j)).collect();
        ensure(window.iter().min() == Some(&s1), || "s_1 is not the least window term".into())?;
        for _ in 0..100 {
            let x = corpus::contraction(&mut r);
            ensure(x.norm_upper() <= Rational::one(), || "generated matrix is not a contraction".into())?;
            let off = x.get(0, 1) * x.get(0, 1) + x.get(1, 0) * x.get(1, 0);
            for (i, h) in functions.iter().enumerate() {
                let oracle = &off * defect(h, &s1);
                let library = w.first_pair_commutator(&x, h).unwrap().sup_frobenius_sq();
                ensure(library == oracle, || format!("function {i}: commutator norm differs from oracle"))?;
                ensure(oracle <= &eps * &eps * x.frobenius_sq(), || format!("function {i}: bound fails"))?;
                ensure(w.check_contraction(&x, h).unwrap(), || format!("function {i}: check_contraction"))?;
            }
        }
        if w.k <= 8 {
            let x = corpus::contraction(&mut r);
            for h in &functions {
                let full = w.full_commutator(&seq, &x, h).unwrap().sup_frobenius_sq();
                ensure(full <= &eps * &eps * x.frobenius_sq(), || "full commutator bound fails".into())?;
            }
        }
    }
    Ok(format!("k = {ks:?} for eps = 1/2, 1/10; 200 contractions x 5 functions"))
}

/// A sparse random element of `H_n`, vanishing on the top interval.
fn sparse_element(r: &mut impl Rng, n: usize) -> ClopenCombination<BigInt> {
    let size = 1usize << n;
    let mut coeffs = vec![BigInt::zero(); size];
    for _ in 0..r.gen_range(1..=12) {
        coeffs[r.gen_range(0..size - 1)] = BigInt::from(r.gen_range(-20..=20));
    }
    if coeffs.iter().all(Zero::is_zero) {
        coeffs[0] = BigInt::one();
    }
    ClopenCombination::from_coeffs(n as u32, coeffs).unwrap()
}

/// Criterion 6: the K0 suite.
fn k0_suite() -> Outcome {
    let seq = DenseSequence::CanonicalTernary;
    let tower = PartitionTower::build(&seq, 12, SplitRule::Midpoint).map_err(|e| e.to_string())?;
    let table = beta_recursion(&tower, 11).map_err(|e| e.to_string())?;
    let mut r = rng(6);
    for n in 1..=10 {
        for i in 0..100 {
            let g = if n <= 6 { corpus::k0_element(&mut r, n as u32, 50) } else { sparse_element(&mut r, n) };
            let lower = beta_apply(&table, n, &g).unwrap();
            let upper = beta_apply(&table, n + 1, &alpha_apply(&tower, n, &g).unwrap()).unwrap();
            ensure(lower.same_function(&upper), || format!("n = {n}, element {i}: beta_(n+1) alpha_n != beta_n"))?;
        }
        for j in 1..1usize << n {
            let (i, diag) = table.row(n, j).last().unwrap();
            ensure(*i == j, || format!("row ({n}, {j}) is not lower triangular"))?;
            ensure(diag.power_of_two_exponent().is_some_and(|e| e >= 0), || format!("delta({n}, {j}, {j}) = {diag:?}"))?;
        }
    }
    let mut generators = 0;
    for n in 1..=8 {
        for j in 1..1usize << n {
            let image = table.image_of_generator(n, j);
            let solved = generator_solve(&table, n, &image).map_err(|e| e.to_string())?;
            let unit = ClopenCombination::<BigInt>::indicator(n as u32, j).unwrap().to_dyadic();
            ensure(solved == unit, || format!("generator ({n}, {j}) does not round-trip"))?;
            generators += 1;
        }
    }
    for k in 0..=12 {
        for _ in 0..4 {
            let n = r.gen_range(1..=6);
            let g = corpus::k0_element(&mut r, n as u32, 9);
            let closed = alpha_composite(&tower, &seq, n, k, &g).unwrap();
            let brute = alpha_composite_brute_force(&tower, &seq, n, k, &g).unwrap();
            ensure(closed == brute, || format!("alpha composite, n = {n}, k = {k}"))?;
        }
    }
    Ok(format!("intertwining n <= 10 (100 each), {generators} generators solved, alpha k <= 12"))
}

/// First `k` at which the window `t_n, ..., t_{n+k-1}` holds `m` terms of
/// `[s, r]` with `2^m >= 1 + |min g|`, computed from scratch.
fn guaranteed_k(tower: &PartitionTower, seq: &DenseSequence, n: usize, oriented: &ClopenCombination<BigInt>) -> usize {
    let coeffs = oriented.coeffs();
    let top = (1..=coeffs.len()).rev().find(|&j| !coeffs[j - 1].is_zero()).expect("nonzero");
    let mut bottom = top;
    while bottom > 1 && coeffs[bottom - 2] >= BigInt::one() {
        bottom -= 1;
    }
    let s = tower.interval(n as u32, bottom).lower();
    let r = tower.interval(n as u32, top).upper();
    let worst = coeffs.iter().cloned().fold(BigInt::zero(), |a, b| a.min(b)).abs();
    let mut needed = 0;
    while (BigInt::one() << needed) < BigInt::one() + &worst {
        needed += 1;
    }
    let (mut hits, mut k) = (0, 0);
    while hits < needed {
        let t = seq.point(n + k);
        if s <= t && t <= r {
            hits += 1;
        }
        k += 1;
    }
    k
}

/// Criterion 7: total order decisions.
fn total_order() -> Outcome {
    let seq = DenseSequence::CanonicalTernary;
    let tower = PartitionTower::build(&seq, 6, SplitRule::Midpoint).map_err(|e| e.to_string())?;
    let table = beta_recursion(&tower, 6).map_err(|e| e.to_string())?;
    let mut r = rng(7);
    let mut worst = 0;
    for i in 0..500 {
        let n = r.gen_range(1..=6);
        let g = corpus::k0_element(&mut r, n as u32, 200);
        let cert = total_order_decide(&tower, &seq, n, &g, 100_000).map_err(|e| format!("element {i}: {e}"))?;
        let beta_sign = beta_apply(&table, n, &g).unwrap().lex_sign();
        ensure(cert.sign == beta_sign, || format!("element {i}: sign {:?} vs lexSign(beta) {beta_sign:?}", cert.sign))?;
        ensure(cert.sign != Sign::Zero, || format!("element {i}: nonzero element got sign zero"))?;
        let oriented = if cert.sign == Sign::Negative { g.neg() } else { g.clone() };
        let bound = guaranteed_k(&tower, &seq, n, &oriented);
        ensure(cert.k <= bound && cert.guaranteed_k == bound, || {
            format!("element {i}: k = {}, reported bound {}, oracle bound {bound}", cert.k, cert.guaranteed_k)
        })?;
        let witness = alpha_composite(&tower, &seq, n, cert.k, &oriented).unwrap();
        ensure(witness.is_pointwise_nonnegative() && witness == cert.witness, || format!("element {i}: witness"))?;
        if cert.k > 0 {
            let before = alpha_composite(&tower, &seq, n, cert.k - 1, &oriented).unwrap();
            ensure(!before.is_pointwise_nonnegative(), || format!("element {i}: k is not minimal"))?;
        }
        let neg = total_order_decide(&tower, &seq, n, &g.neg(), 100_000).unwrap();
        ensure(neg.sign == cert.sign.flip(), || format!("element {i}: sign(-g) != -sign(g)"))?;
        worst = worst.max(cert.k);
    }
    Ok(format!("500 elements, largest k = {worst}"))
}

/// Criterion 8: lambda and the commuting squares.
fn embedding() -> Outcome {
    let mut r = rng(8);
    let xs: Vec<Point> = (0..1000).map(|_| corpus::point(&mut r, Space::Cantor, 20)).collect();
    let ds: Vec<Point> = (0..1000).map(|_| corpus::point(&mut r, Space::Interval, 16)).collect();
    let images: Vec<Point> = xs.iter().map(|x| lambda_map(x).unwrap()).collect();
    for (x, y) in xs.iter().zip(&images) {
        ensure(y.to_rational() == lambda_oracle(x), || format!("lambda({x}) = {y}"))?;
    }
    for (a, b) in xs.iter().zip(&images) {
        for (c, e) in xs.iter().zip(&images) {
            ensure(a > c || b <= e, || format!("lambda not monotone at {a}, {c}"))?;
        }
    }
    for dpt in &ds {
        let pre = lambda_min_preimage(dpt).unwrap();
        ensure(lambda_oracle(&pre) == dpt.to_rational(), || format!("section fails at {dpt}"))?;
        // Least preimage: lambda(x) >= d exactly when x >= pre.
        for (x, y) in xs.iter().zip(&images) {
            ensure((y >= dpt) == (x >= &pre), || format!("{pre} is not the least preimage of {dpt}"))?;
        }
    }
    let ternary = DenseSequence::CanonicalTernary;
    let dyadic = DenseSequence::CanonicalDyadic;
    for j in 1..=256 {
        ensure(lambda_oracle(&ternary.point(j)) == dyadic.point(j).to_rational(), || format!("s_{j} != lambda(t_{j})"))?;
    }
    for n in 1..=6 {
        let functions: Vec<RationalStepFunction> =
            (0..50).map(|_| corpus::step_function(&mut r, Space::Interval, 1 << n, 4, 10, 3)).collect();
        let m = n + 2;
        let report = lambda_sharp_check(&functions, n, m, &xs[..40]).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("n = {n}: {report:?}"))?;
        let phi = DiagonalMorphism::canonical(&dyadic, n, m).unwrap();
        let psi = DiagonalMorphism::canonical(&ternary, n, m).unwrap();
        for f in functions.iter().take(4) {
            let left = psi.apply(&pullback_lambda(f).unwrap()).unwrap();
            let right = phi.apply(f).unwrap();
            for x in &xs[..100] {
                let y = Point::from_rational(&lambda_oracle(x), Space::Interval).unwrap();
                ensure(left.evaluate(x).unwrap() == right.evaluate(&y).unwrap(), || format!("n = {n}: square at {x}"))?;
            }
        }
    }
    Ok("1000 points, 1000 dyadics, 50 functions per stage n <= 6".into())
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ahcert")).args(args).output().expect("binary runs")
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_default()
}

/// Criterion 9: byte-reproducible certificates.
fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let names =
        ["ideal-cert", "stability", "traceless", "goodearl", "approx-div", "k0-verify", "total-order", "embed-check"];
    for name in names {
        let mut runs = Vec::new();
        for (tag, jobs) in [("a", "1"), ("b", "1"), ("c", "3")] {
            let path = dir.join(format!("{name}-{tag}.json"));
            let out = cli(&[name, "--seed", "7", "--jobs", jobs, "--out", path.to_str().unwrap()]);
            ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
            runs.push(read(&path));
        }
        ensure(!runs[0].is_empty() && runs[0] == runs[1], || format!("{name}: repeated runs differ"))?;
        ensure(runs[0] == runs[2], || format!("{name}: --jobs changes the certificate"))?;
        let stdout = cli(&[name, "--seed", "7"]).stdout;
        ensure(stdout == runs[0], || format!("{name}: stdout JSON differs from --out"))?;
    }
    let all = dir.join("all");
    let out = cli(&["all", "--seed", "7", "--jobs", "4", "--out", all.to_str().unwrap()]);
    ensure(out.status.code() == Some(0), || format!("all: exit {:?}", out.status.code()))?;
    for name in names {
        ensure(read(&all.join(format!("{name}.json"))) == read(&dir.join(format!("{name}-a.json"))), || {
            format!("all: {name} differs from the single run")
        })?;
    }
    ensure(cli(&[]).status.code() == Some(1), || "empty invocation should exit 1".into())?;
    let other = cli(&["traceless", "--seed", "8"]).stdout;
    ensure(other == cli(&["traceless", "--seed", "8"]).stdout, || "seed 8 is not reproducible".into())?;
    Ok(format!("{} experiments x 4 runs, plus `all`", names.len()))
}

#[test]
fn acceptance_criteria() {
    type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "morphism oracle equivalence", Some(10), morphism_oracle),
        (2, "ideal certification", Some(30), ideal_certification),
        (3, "tracelessness", Some(5), tracelessness),
        (4, "goodearl dichotomy", Some(5), goodearl),
        (5, "approximate divisibility", Some(30), approximate_divisibility),
        (6, "k0 suite", Some(60), k0_suite),
        (7, "total order", Some(60), total_order),
        (8, "embedding", Some(10), embedding),
        (9, "determinism", None, determinism),
    ];
    let mut failures = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > Duration::from_secs(b));
        let target = budget.map_or("none".to_string(), |b| format!("< {b} s"));
        let (verdict, detail) = match (&outcome, over) {
            (Ok(detail), false) => ("PASS", detail.clone()),
            (Ok(detail), true) => ("FAIL", format!("over budget; {detail}")),
            (Err(reason), _) => ("FAIL", reason.clone()),
        };
        let line = format!(
            "criterion {id} [{name}]: {verdict} in {:.2} s (target {target}): {detail}",
            elapsed.as_secs_f64()
        );
        let _ = writeln!(std::io::stderr(), "{line}");
        if verdict == "FAIL" {
            failures.push(line);
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
