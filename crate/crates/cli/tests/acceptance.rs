//! The ten acceptance criteria, each against an oracle written here rather
//! than borrowed from the library. One PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use wpsbir_core::classify::cox::DEFAULT_CAP;
use wpsbir_core::classify::{self, graded_dimension, Generality, HypersurfaceProblem};
use wpsbir_core::cy::{self, intmat, CySetup};
use wpsbir_core::ff::Poly;
use wpsbir_core::fflab::{self, FFHypersurface, FFPoint};
use wpsbir_core::lattice::{cones_equal, interiors_disjoint, DivisorClass, RationalCone};
use wpsbir_core::par::Exec;
use wpsbir_core::sqm::{self, toric};
use wpsbir_core::verify::forms_as_polys;
use wpsbir_core::wps::{section_count, WeightVector};
use wpsbir_core::Error;

type Outcome = Result<String, String>;

fn wv(w: &[u64]) -> WeightVector {
    WeightVector::new(w.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- arithmetic mod p, kept separate from the library ----------

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powm(a: u64, mut e: u64, p: u64) -> u64 {
    let (mut r, mut b) = (1 % p, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn negm(a: u64, p: u64) -> u64 {
    (p - a % p) % p
}

fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_multiple_of(p)) else { continue };
        m.swap(r, piv);
        let inv = powm(m[r][c], p - 2, p);
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = mulm(m[i][c], inv, p);
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - mulm(f, m[r][j], p)) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn det3(m: [[u64; 3]; 3], p: u64) -> u64 {
    let t = |a: u64, b: u64, c: u64| mulm(mulm(a, b, p), c, p);
    let pos = (t(m[0][0], m[1][1], m[2][2]) + t(m[0][1], m[1][2], m[2][0]) + t(m[0][2], m[1][0], m[2][1])) % p;
    let neg = (t(m[0][2], m[1][1], m[2][0]) + t(m[0][0], m[1][2], m[2][1]) + t(m[0][1], m[1][0], m[2][2])) % p;
    (pos + p - neg) % p
}

fn scaled_equal(a: &[u64], b: &[u64], w: &[u64], p: u64) -> bool {
    (1..p).any(|l| a.iter().zip(b).zip(w).all(|((&x, &y), &k)| mulm(powm(l, k, p), x, p) == y))
}

// ---------- criterion 1 ----------

/// `M` for the given forms: `x1` on the diagonal, `-x0` below it, forms in
/// the last column.
fn oracle_m(forms: &[Poly]) -> Vec<Vec<Poly>> {
    let d = forms.len() - 1;
    let (nv, p) = (forms[0].nvars(), forms[0].prime());
    let mut m = vec![vec![Poly::zero(nv, p); d + 1]; d + 1];
    for j in 0..d {
        m[j][j] = Poly::var(1, nv, p);
        m[j + 1][j] = Poly::var(0, nv, p).scale(p - 1);
    }
    for (i, f) in forms.iter().enumerate() {
        m[i][d] = f.clone();
    }
    m
}

/// Leibniz expansion, skipping zero entries.
fn leibniz(m: &[Vec<Poly>]) -> Poly {
    fn rec(m: &[Vec<Poly>], row: usize, used: &mut Vec<bool>, perm: &mut Vec<usize>, acc: &mut Poly) {
        let n = m.len();
        if row == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let p = acc.prime();
            let mut t = Poly::constant(1, acc.nvars(), p);
            for (r, &c) in perm.iter().enumerate() {
                t = t.mul(&m[r][c]);
            }
            *acc = if inv % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            return;
        }
        for c in 0..n {
            if !used[c] && !m[row][c].is_zero() {
                used[c] = true;
                perm.push(c);
                rec(m, row + 1, used, perm, acc);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut acc = Poly::zero(m[0][0].nvars(), m[0][0].prime());
    rec(m, 0, &mut vec![false; m.len()], &mut Vec::new(), &mut acc);
    acc
}

fn criterion_1() -> Outcome {
    let w = wv(&[1, 1, 1]);
    let mut checked = 0;
    for p in [101u64, 997] {
        for d in 1..=6usize {
            for i in 0..100u64 {
                let h = fflab::sample_hypersurface(p, d, 2, &w, 1000 * d as u64 + i).map_err(|e| e.to_string())?;
                let forms = forms_as_polys(&h);
                let nv = forms[0].nvars();
                let x0 = Poly::var(0, nv, p);
                let x1 = Poly::var(1, nv, p);
                let mut expected = Poly::zero(nv, p);
                for (k, f) in forms.iter().enumerate() {
                    expected = expected.add(&x0.pow((d - k) as u32).mul(&x1.pow(k as u32)).mul(f));
                }
                let mine = oracle_m(&forms);
                ensure(sqm::m_polys(&forms) == mine, || format!("M differs for d = {d}"))?;
                let lib = sqm::poly_det(&sqm::m_polys(&forms));
                let oracle = leibniz(&mine);
                ensure(lib == oracle, || format!("det mismatch d = {d}, p = {p}"))?;
                ensure(oracle == expected || oracle == expected.scale(p - 1), || {
                    format!("det is not +-(sum x0^(d-i) x1^i f_i) for d = {d}, p = {p}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances, d = 1..6, p in {{101, 997}}"))
}

// ---------- criteria 2 and 9 ----------

const CONFIGS: [(usize, &[u64], i64); 3] = [(2, &[1, 1, 1, 2], 2), (3, &[1, 1, 1, 1], 1), (2, &[1, 1, 2, 3], 6)];

fn on_y(h: &FFHypersurface, pt: &FFPoint) -> bool {
    let f = h.forms_at(&pt.y);
    let p = h.p;
    let d = h.d as u64;
    let s = f.iter().enumerate().fold(0, |acc, (i, &fi)| {
        (acc + mulm(mulm(powm(pt.x[0], d - i as u64, p), powm(pt.x[1], i as u64, p), p), fi, p)) % p
    });
    s == 0
}

fn kernel_equations_hold(f: &[u64], x: &[u64], z: &[u64], p: u64) -> bool {
    let d = z.len();
    (0..=d).all(|i| {
        let mut s = f[i];
        if i >= 1 {
            s = (s + negm(mulm(x[0], z[i - 1], p), p)) % p;
        }
        if i < d {
            s = (s + mulm(x[1], z[i], p)) % p;
        }
        s == 0
    })
}

fn n_minors_vanish(f: &[u64], z: &[u64], p: u64) -> bool {
    let d = z.len();
    let row = |r: usize| -> [u64; 3] {
        let a = if r == 0 { 0 } else { negm(z[r - 1], p) };
        let b = if r == d { 0 } else { z[r] };
        [a, b, f[r]]
    };
    for i in 0..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                if det3([row(i), row(j), row(k)], p) != 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_2() -> Outcome {
    let p = 101;
    let mut summary = Vec::new();
    for (d, w, e) in CONFIGS {
        let h = fflab::sample_hypersurface(p, d, e, &wv(w), 2024).map_err(|e| e.to_string())?;
        let pts = fflab::sample_points(&h, 200, 2025, Exec::Parallel);
        ensure(pts.len() == 200, || format!("only {} points sampled", pts.len()))?;
        let (mut ok, mut flagged) = (0, 0);
        for pt in &pts {
            ensure(on_y(&h, pt), || format!("{pt:?} is not on Y"))?;
            let q = match sqm::sqm_forward(&h, pt) {
                Ok(q) => q,
                Err(Error::Indeterminacy(_)) => {
                    ensure(h.forms_at(&pt.y).iter().all(|&c| c == 0), || "spurious indeterminacy".into())?;
                    flagged += 1;
                    continue;
                }
                Err(e) => return Err(format!("forward failed at {pt:?}: {e}")),
            };
            let f = h.forms_at(&q.y);
            ensure(kernel_equations_hold(&f, &pt.x, &q.z, p), || format!("M (z, 1) != 0 at {pt:?}"))?;
            ensure(n_minors_vanish(&f, &q.z, p), || format!("a minor of N is nonzero at {q:?}"))?;
            let back = sqm::sqm_backward(&h, &q).map_err(|e| format!("backward failed at {q:?}: {e}"))?;
            ensure(
                scaled_equal(&back.x, &pt.x, &[1, 1], p) && scaled_equal(&back.y, &pt.y, w, p),
                || format!("roundtrip moved {pt:?} to {back:?}"),
            )?;
            ok += 1;
        }
        summary.push(format!("{ok}+{flagged}"));
    }
    Ok(format!("roundtrips ok+flagged per config: {}", summary.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut total = 0;
    let mut flagged = 0;
    for p in [101u64, 997] {
        for (d, w, e) in CONFIGS {
            let h = fflab::sample_hypersurface(p, d, e, &wv(w), 77).map_err(|e| e.to_string())?;
            let pts = fflab::sample_points(&h, 200, 78, Exec::Parallel);
            for pt in &pts {
                let f = h.forms_at(&pt.y);
                if f.iter().all(|&c| c == 0) {
                    flagged += 1;
                    continue;
                }
                let mut m = vec![vec![0u64; d + 1]; d + 1];
                for j in 0..d {
                    m[j][j] = pt.x[1];
                    m[j + 1][j] = negm(pt.x[0], p);
                }
                for i in 0..=d {
                    m[i][d] = f[i];
                }
                let drop = d + 1 - rank_mod(m, p);
                ensure(drop == 1, || format!("rank drop {drop} at {pt:?} (p = {p}, d = {d})"))?;
                total += 1;
            }
            let stats = fflab::rank_statistics(&h, &pts, Exec::Parallel);
            ensure(stats.violations == 0 && stats.drop1 + stats.flagged.len() == pts.len(), || {
                format!("library statistics disagree: {stats:?}")
            })?;
        }
    }
    Ok(format!("{total} points with drop exactly 1, {flagged} flagged"))
}

// ---------- criterion 3 ----------

fn criterion_3() -> Outcome {
    let problems = [
        ("P1,P3", "1,2"),
        ("P1,P3", "2,2"),
        ("P1,P3", "3,1"),
        ("P1,P3", "3,2"),
        ("P1,P4", "4,1"),
        ("P1,P4", "4,2"),
        ("P1,P(1,1,1,2)", "3,2"),
        ("P1,P(1,1,2)", "2,2"),
        ("P1,P(1,1,2)", "2,4"),
        ("P1,P(1,2,3)", "2,6"),
    ];
    let mut checks = 0;
    for (space, degree) in problems {
        let prob = HypersurfaceProblem::parse(space, degree, Generality::VeryGeneral).map_err(|e| e.to_string())?;
        let d = prob.degree.0[0];
        let e = prob.degree.0[1];
        let pres = classify::cox_presentation(&prob).map_err(|err| format!("{space} ({degree}): {err}"))?;
        for p in [101u64, 997] {
            for seed in 0..20 {
                let got = graded_dimension(&pres, &DivisorClass(vec![-1, e]), p, seed, DEFAULT_CAP)
                    .map_err(|err| err.to_string())?;
                ensure(got as i64 == d, || format!("{space} ({degree}): dim = {got}, expected {d}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} graded dimensions equal d"))
}

// ---------- criterion 4 ----------

fn criterion_4() -> Outcome {
    let emax = 50usize;
    let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
    let mut all = Vec::new();
    for _ in 0..5 {
        tuples = tuples
            .iter()
            .flat_map(|t| (1..=6u64).map(move |x| [t.as_slice(), &[x]].concat()))
            .collect();
        all.extend(tuples.iter().cloned());
    }
    for w in &all {
        // coefficients of prod 1/(1 - t^w_i)
        let mut series = vec![0u128; emax + 1];
        series[0] = 1;
        for &wi in w {
            let mut next = vec![0u128; emax + 1];
            for (s, &c) in series.iter().enumerate() {
                let mut t = s;
                while t <= emax {
                    next[t] += c;
                    t += wi as usize;
                }
            }
            series = next;
        }
        let v = wv(w);
        for (e, &c) in series.iter().enumerate() {
            let got = section_count(&v, e as i64);
            ensure(got == c.into(), || format!("h0(P{w:?}, O({e})) = {got}, series gives {c}"))?;
        }
    }
    Ok(format!("{} weight vectors, e <= {emax}", all.len()))
}

// ---------- criterion 5 ----------

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_5() -> Outcome {
    let mut found = BTreeSet::new();
    for a in 1..=50u64 {
        for b in 1..=50 {
            for c in 1..=50 {
                let well_formed = gcd(a, b) == 1 && gcd(b, c) == 1 && gcd(a, c) == 1;
                let singular = (a, b, c) != (1, 1, 1);
                let l = a * b / gcd(a, b);
                let l = l * c / gcd(l, c);
                let gorenstein = (a + b + c) % l == 0;
                let w = wv(&[a, b, c]);
                ensure(w.is_well_formed() == well_formed, || format!("well-formedness of ({a},{b},{c})"))?;
                ensure(w.is_gorenstein() == gorenstein, || format!("Gorenstein test of ({a},{b},{c})"))?;
                if well_formed && singular && w.is_gorenstein() {
                    let mut s = [a, b, c];
                    s.sort_unstable();
                    found.insert(s);
                }
            }
        }
    }
    let found: Vec<[u64; 3]> = found.into_iter().collect();
    ensure(found == [[1, 1, 2], [1, 2, 3]], || format!("Gorenstein surfaces: {found:?}"))?;
    Ok("exactly P(1,1,2) and P(1,2,3)".into())
}

// ---------- criterion 6 ----------

fn quotient(d: usize) -> Vec<BigInt> {
    // (T-1)^{d+1} - 1 = sum a_i T^i; quotient coefficient q_k = sum_{i > k} a_i 2^{i-k-1}
    let n = d + 1;
    let mut a: Vec<BigInt> = Vec::with_capacity(n + 1);
    let mut binom = BigInt::one();
    for i in 0..=n {
        let sign = if (n - i).is_multiple_of(2) { 1 } else { -1 };
        a.push(&binom * sign);
        binom = binom * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    a[0] -= 1;
    (0..n)
        .map(|k| {
            (k + 1..=n).fold(BigInt::zero(), |s, i| s + &a[i] * (BigInt::one() << (i - k - 1)))
        })
        .collect()
}

fn reduce(p: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    let mut v: Vec<u64> = p
        .iter()
        .map(|c| {
            let r = ((c % &qb) + &qb) % &qb;
            u64::try_from(r).unwrap()
        })
        .collect();
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mulm(*a.last().unwrap(), powm(*b.last().unwrap(), q - 2, q), q);
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + q - mulm(f, c, q)) % q;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn criterion_6() -> Outcome {
    let primes = [1_000_003u64, 1_000_033, 1_000_037, 1_000_039];
    for d in 1..=100 {
        let lib = fflab::p_poly(d);
        let mine = quotient(d);
        ensure(lib == mine, || format!("p_poly({d}) differs from the quotient"))?;
        ensure(mine.len() == d + 1 && mine[d] == BigInt::one(), || format!("degree of p_poly({d})"))?;
        let deriv: Vec<BigInt> = mine.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
        // monic, so gcd 1 modulo any prime certifies squarefreeness over Q
        let certified = primes
            .iter()
            .any(|&q| poly_gcd_degree(reduce(&mine, q), reduce(&deriv, q), q) == 0);
        ensure(certified, || format!("no certificate that p_poly({d}) is squarefree"))?;
        ensure(fflab::is_squarefree_q(&lib), || format!("library disagrees on d = {d}"))?;
    }
    Ok("d = 1..100: degree d and squarefree".into())
}

// ---------- criterion 7 ----------

fn criterion_7() -> Outcome {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let table = std::fs::read_to_string(fixtures.join("classification.tsv")).map_err(|e| e.to_string())?;
    let golden = std::fs::read_to_string(fixtures.join("classification.golden.jsonl")).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<&str>> = table
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
        .collect();
    let expected: Vec<&str> = golden.lines().collect();
    ensure(rows.len() >= 25, || format!("only {} rows", rows.len()))?;
    ensure(rows.len() == expected.len(), || "table and golden file differ in length".into())?;
    let citations: BTreeSet<String> = expected
        .iter()
        .filter_map(|l| l.split("\"citation\":\"").nth(1))
        .map(|s| s.split('"').next().unwrap().to_string())
        .collect();
    for c in [
        "Theorem A(1)",
        "Theorem A(2)",
        "Theorem A(3)",
        "Theorem A(4)",
        "Theorem B(1)",
        "Theorem B(2)",
        "CY anticanonical, n = 0",
        "CY anticanonical, n = 1",
        "CY anticanonical, n > 1",
    ] {
        ensure(citations.contains(c), || format!("no row exercises {c}"))?;
    }
    let bin = env!("CARGO_BIN_EXE_wpsbir");
    let mut raw = Vec::new();
    for (row, want) in rows.iter().zip(&expected) {
        let out = Command::new(bin)
            .args(["classify", "--space", row[0], "--degree", row[1], "--generality", row[2]])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit {:?} for {row:?}", out.status.code()))?;
        let got = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
        ensure(got.trim_end_matches('\n') == *want, || format!("row {row:?}:\n got {got}\nwant {want}"))?;
        raw.push(got);
    }
    for (space, degree) in [("P1,P(1,1,2)", "1,4"), ("P1,P(1,2,3)", "1,6")] {
        ensure(
            rows.iter().zip(&expected).any(|(r, e)| r[0] == space && r[1] == degree && e.contains("\"status\":\"Open\"")),
            || format!("open row {space} ({degree}) missing"),
        )?;
    }
    Ok(format!("{} rows byte-identical", raw.len()))
}

// ---------- criterion 8 ----------

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn criterion_8() -> Outcome {
    let pool: [&str; 5] = ["P1", "P2", "P3", "P(1,1,2)", "P(1,2,3)"];
    let mut setups = 0;
    // every product of at most five factors from the pool, with P1 first
    let mut stack: Vec<Vec<usize>> = (0..pool.len()).map(|i| vec![i]).collect();
    while let Some(pick) = stack.pop() {
        if pick.len() < 5 {
            for i in *pick.last().unwrap()..pool.len() {
                let mut q = pick.clone();
                q.push(i);
                stack.push(q);
            }
        }
        let space = pick.iter().map(|&i| pool[i]).collect::<Vec<_>>().join(",");
        let Ok(s) = CySetup::new(space.parse().map_err(|e: Error| e.to_string())?) else { continue };
        setups += 1;
        let c: Vec<i64> = s.space().factors().iter().map(|f| f.weights().iter().sum::<u64>() as i64).collect();
        for l in s.involution_indices() {
            let m = cy::involution_matrix(&s, l).map_err(|e| e.to_string())?.matrix;
            let mut mine = identity(s.rho());
            for i in 0..s.rho() {
                mine[i][l - 1] = if i == l - 1 { -1 } else { c[i] };
            }
            ensure(m == mine, || format!("iota_{l} on {space}"))?;
            ensure(matmul(&m, &m) == identity(s.rho()), || format!("iota_{l}^2 != I on {space}"))?;
            for i in (0..s.rho()).filter(|&i| i != l - 1) {
                ensure((0..s.rho()).all(|r| m[r][i] == i64::from(r == i)), || format!("H_{} moved", i + 1))?;
            }
        }
    }
    ensure(setups >= 20, || format!("only {setups} setups"))?;

    for (space, c) in [("P1,P(1,1,2)", 4), ("P1,P(1,2,3)", 6)] {
        let s = CySetup::new(space.parse().unwrap()).map_err(|e| e.to_string())?;
        let mov = cy::movable_cone_n1(&s).map_err(|e| e.to_string())?;
        let expect = RationalCone::new(vec![vec![1, 0], vec![-1, c]]).unwrap();
        ensure(cones_equal(&mov, &expect).unwrap(), || format!("Mov on {space} is {mov}"))?;
    }

    for space in ["P1,P1,P2", "P1,P1,P1,P1"] {
        let s = CySetup::new(space.parse().unwrap()).map_err(|e| e.to_string())?;
        let g = matmul(
            &cy::involution_matrix(&s, 2).unwrap().matrix,
            &cy::involution_matrix(&s, 1).unwrap().matrix,
        );
        ensure(intmat::is_infinite_order(&g).unwrap(), || format!("iota1 iota2 finite on {space}"))?;
        let mut power = g.clone();
        for m in 1..=200 {
            ensure(power != identity(s.rho()), || format!("(iota1 iota2)^{m} = I on {space}"))?;
            power = matmul(&power, &g);
        }
    }

    let s = CySetup::new("P1,P1,P2".parse().unwrap()).unwrap();
    let chambers = cy::orbit_chambers(&s, 4, Exec::Parallel).map_err(|e| e.to_string())?;
    // reduced words of length <= 4 in two involutions: 1 + 2 * 4
    ensure(chambers.len() == 9, || format!("{} chambers", chambers.len()))?;
    for (i, a) in chambers.iter().enumerate() {
        for b in &chambers[i + 1..] {
            ensure(interiors_disjoint(&a.generators, &b.generators).unwrap(), || {
                format!("chambers {:?} and {:?} overlap", a.word, b.word)
            })?;
            // the barycentre of one chamber is not strictly inside another
            let centre: Vec<i64> = (0..3).map(|k| a.generators.generators().iter().map(|g| g[k]).sum()).collect();
            ensure(!strictly_inside(b.generators.generators(), &centre), || "barycentre overlap".into())?;
        }
    }
    Ok(format!("{setups} setups, 9 disjoint chambers, infinite order on both shapes"))
}

/// Whether `v` has strictly positive coordinates in the basis `g` (three
/// generators in rank 3), by Cramer's rule.
fn strictly_inside(g: &[Vec<i64>], v: &[i64]) -> bool {
    let det = |c: [&[i64]; 3]| -> i128 {
        let m = |i: usize, j: usize| c[j][i] as i128;
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    let base = det([&g[0], &g[1], &g[2]]);
    let coords = [det([v, &g[1], &g[2]]), det([&g[0], v, &g[2]]), det([&g[0], &g[1], v])];
    coords.iter().all(|&c| c * base.signum() > 0)
}

// ---------- criterion 10 ----------

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn weighted_monomials(w: &[u64], e: i64) -> u64 {
    if e < 0 {
        return 0;
    }
    match w.split_first() {
        None => u64::from(e == 0),
        Some((&w0, rest)) => (0..=e / w0 as i64).map(|a| weighted_monomials(rest, e - a * w0 as i64)).sum(),
    }
}

fn criterion_10() -> Outcome {
    let configs: [(usize, i64, &[u64]); 10] = [
        (2, 1, &[1, 1, 1]),
        (2, 2, &[1, 1, 1]),
        (3, 1, &[1, 1, 1, 1]),
        (2, 2, &[1, 1, 2]),
        (2, 4, &[1, 1, 2]),
        (2, 6, &[1, 2, 3]),
        (3, 2, &[1, 1, 1, 2]),
        (3, 6, &[1, 1, 2, 3]),
        (4, 3, &[1, 1, 1, 1, 3]),
        (5, 1, &[1, 1, 1, 1, 1, 1]),
    ];
    for (d, e, w) in configs {
        // h0(P^{d-1} x P(w), O(a, b)) = C(a + d - 1, d - 1) * #(weighted monomials of degree b)
        let h0 = |a: i64, b: i64| if a < 0 { 0 } else { binom(a + d as i64 - 1, d as i64 - 1) * weighted_monomials(w, b) };
        let oracle = [h0(0, 0), h0(0, 0), h0(-1, e)];
        let got = toric::flip_section_check(d, e, &wv(w)).map_err(|err| err.to_string())?;
        ensure(got.breakdown == oracle, || format!("breakdown {:?} vs {oracle:?}", got.breakdown))?;
        ensure(got.total == 2, || format!("total {} for (d, e, w) = ({d}, {e}, {w:?})", got.total))?;
    }
    Ok("10 configurations give 2 = 1 + 1 + 0".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "determinant identity", limit: secs(10), run: criterion_1 },
        Criterion { id: 2, name: "SQM roundtrip", limit: secs(30), run: criterion_2 },
        Criterion { id: 3, name: "graded Cox dimension", limit: secs(60), run: criterion_3 },
        Criterion { id: 4, name: "section-count oracle", limit: secs(5), run: criterion_4 },
        Criterion { id: 5, name: "Gorenstein surface scan", limit: secs(5), run: criterion_5 },
        Criterion { id: 6, name: "p(T) suite", limit: secs(2), run: criterion_6 },
        Criterion { id: 7, name: "classification golden table", limit: secs(2), run: criterion_7 },
        Criterion { id: 8, name: "CY lattice suite", limit: secs(30), run: criterion_8 },
        Criterion { id: 9, name: "rank statistics", limit: secs(30), run: criterion_9 },
        Criterion { id: 10, name: "flip section count", limit: secs(1), run: criterion_10 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(msg) if elapsed <= c.limit => (true, msg),
            Ok(msg) => (false, format!("{msg}; too slow")),
            Err(msg) => (false, msg),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {:<28} {:>7.2}s / {:>2}s  {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
