//! End-to-end acceptance suite. Runs every criterion, prints one line each and
//! exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minvar::analysis::{conductor, gap_profile, spec_semigroup};
use minvar::enumeration::{compositions, count_by_enumeration, count_by_enumeration_bounded};
use minvar::growth::{
    b_sequence, beta_bracket, gcd_subsequence_roots, solve_alpha, verify, RootBracket,
    SolverConfig, Witness,
};
use minvar::numeric::{parse_rational, rational_to_f64};
use minvar::{recip_one_minus, CustomMultiset, MultisetSpec, TruncatedSeries};

const PUBLISHED_ROOTS: [f64; 16] = [
    1.0, 1.0, 1.0, 1.1892, 1.2457, 1.2599, 1.2584, 1.2753, 1.3052, 1.3195, 1.3244, 1.3276, 1.3355,
    1.3428, 1.3478, 1.3515,
];

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_minvar"))
        .args(args)
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

fn stdout_ok(out: &Output) -> Result<String, String> {
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8(out.stdout.clone()).expect("utf-8 output"))
}

/// Data rows of a CSV table as (header, rows); comment lines are skipped.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap_or("")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn field<'a>(header: &[String], row: &'a [String], name: &str) -> &'a str {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    &row[i]
}

fn rational(s: &str) -> BigRational {
    parse_rational(s).unwrap_or_else(|e| panic!("bad rational {s}: {e:?}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `sum a_k q^k` over `k <= order`, by plain powers.
fn partial_sum(spec: &MultisetSpec, q: &BigRational, order: usize) -> BigRational {
    spec.terms(order as u64)
        .into_iter()
        .map(|(k, a)| {
            BigRational::from_integer(BigInt::from(a)) * num_traits::pow(q.clone(), k as usize)
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

fn roots_column(text: &str) -> Vec<(u64, f64)> {
    let (header, rows) = csv(text);
    rows.iter()
        .map(|r| {
            (
                field(&header, r, "n").parse().unwrap(),
                field(&header, r, "root").parse().unwrap(),
            )
        })
        .collect()
}

fn criterion_1() -> Check {
    let (out, elapsed) = run(&["roots", "fg-codim", "--order", "16", "--format", "csv"]);
    let rows = roots_column(&stdout_ok(&out)?);
    ensure(rows.len() == 16, || format!("{} rows", rows.len()))?;
    let mut worst = 0.0f64;
    for ((n, root), published) in rows.iter().zip(PUBLISHED_ROOTS) {
        let diff = (root - published).abs();
        worst = worst.max(diff);
        ensure(diff <= 5e-4, || format!("n = {n}: {root} vs {published}"))?;
    }
    let n7 = rows[6].1;
    ensure((n7 - 1.25850).abs() < 5e-6, || format!("n = 7 root {n7}"))?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("max deviation {worst:.2e}, {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let (out, elapsed) = run(&["roots", "fg-codim", "--order", "24", "--format", "csv"]);
    let rows = roots_column(&stdout_ok(&out)?);
    let (n, root) = *rows.last().ok_or("no rows")?;
    ensure(n == 24, || format!("last row n = {n}"))?;
    ensure((root - 1.3732).abs() <= 5e-4, || format!("root {root}"))?;
    // b_24 = 2024 from an independent count; 2024^(1/24) by f64
    let b24 = count_by_enumeration(&MultisetSpec::fg_codim(), 24).map_err(|e| e.to_string())?;
    let direct = b24.to_f64().unwrap().powf(1.0 / 24.0);
    ensure((root - direct).abs() < 1e-8, || {
        format!("{root} vs direct {direct}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("b_24 = {b24}, root {root}, {elapsed:.2?}"))
}

fn criterion_3() -> Check {
    let (out, elapsed) = run(&["solve", "fg-codim", "--eps", "1e-6", "--format", "csv"]);
    let text = stdout_ok(&out)?;
    let (header, rows) = csv(&text);
    let row = rows.first().ok_or("no row")?;
    let get = |name| field(&header, row, name);
    ensure(get("verdict") == "bracketed", || {
        format!("verdict {}", get("verdict"))
    })?;
    let alpha_mid: f64 = get("alpha_mid").parse().unwrap();
    let beta_mid: f64 = get("beta_mid").parse().unwrap();
    ensure((alpha_mid - 0.7054).abs() <= 5e-4, || {
        format!("alpha {alpha_mid}")
    })?;
    ensure((beta_mid - 1.4176).abs() <= 5e-4, || {
        format!("beta {beta_mid}")
    })?;

    let spec = MultisetSpec::fg_codim();
    let lower = Witness {
        point: rational(get("alpha_lo")),
        order: get("lower_order").parse().unwrap(),
        value: rational(get("lower_bound")),
    };
    let upper = Witness {
        point: rational(get("alpha_hi")),
        order: get("upper_order").parse().unwrap(),
        value: rational(get("upper_bound")),
    };
    ensure(&upper.point - &lower.point <= rational("1e-6"), || {
        "width above 1e-6".into()
    })?;
    // independent recheck: plain powers plus the closed-form tail q^(N+1)/(1-q)
    let one = BigRational::one();
    let q = &lower.point;
    let tail = num_traits::pow(q.clone(), lower.order + 1) / (&one - q);
    let lower_bound = partial_sum(&spec, q, lower.order) + tail;
    ensure(lower_bound < one && lower_bound == lower.value, || {
        "lower witness fails".into()
    })?;
    let upper_value = partial_sum(&spec, &upper.point, upper.order);
    ensure(upper_value >= one && upper_value == upper.value, || {
        "upper witness fails".into()
    })?;
    verify(&spec, &RootBracket::Bracketed { lower, upper }).map_err(|e| e.to_string())?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "alpha ~ {alpha_mid}, beta ~ {beta_mid}, {elapsed:.2?}"
    ))
}

fn criterion_4() -> Check {
    let spec = MultisetSpec::custom(CustomMultiset::new("golden", vec![(1, 1), (2, 1)]).unwrap());
    let eps = rational("1e-9");
    let bracket = solve_alpha(&spec, &eps, &SolverConfig::default()).map_err(|e| e.to_string())?;
    verify(&spec, &bracket).map_err(|e| e.to_string())?;
    let (lo, hi) = bracket.endpoints().ok_or("no bracket")?;
    // x = (sqrt5 - 1)/2 is the positive root of x^2 + x = 1
    let f = |x: &BigRational| x * x + x;
    let one = BigRational::one();
    ensure(f(lo) <= one && f(hi) >= one, || {
        "bracket misses (sqrt5-1)/2".into()
    })?;
    let width = hi - lo;
    ensure(width <= eps, || format!("width {width}"))?;
    Ok(format!("width {:.2e}", rational_to_f64(&width)))
}

fn random_customs(seed: u64, count: usize) -> Vec<MultisetSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut terms: Vec<(u64, u64)> = Vec::new();
            let size = rng.gen_range(1..=4);
            while terms.len() < size {
                let e = rng.gen_range(1..=10);
                if terms.iter().all(|&(k, _)| k != e) {
                    terms.push((e, rng.gen_range(1..=3)));
                }
            }
            MultisetSpec::custom(CustomMultiset::new(format!("random{i}"), terms).unwrap())
        })
        .collect()
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut specs = vec![
        MultisetSpec::fg_codim(),
        MultisetSpec::codim(),
        MultisetSpec::gk_fg(2).unwrap(),
        MultisetSpec::gk(2).unwrap(),
        MultisetSpec::factorial(),
    ];
    specs.extend(random_customs(2024, 20));
    let mut streamed = 0usize;
    for spec in &specs {
        let b = b_sequence(spec, 25);
        for n in 0..=25u64 {
            let oracle = count_by_enumeration(spec, n).map_err(|e| e.to_string())?;
            ensure(oracle == b[n as usize], || {
                format!("{spec} n = {n}: oracle {oracle}, b_n {}", b[n as usize])
            })?;
            // walk the listing itself when it is small enough
            if oracle <= BigUint::from(200_000u32) {
                let listed = compositions(spec, n).map_err(|e| e.to_string())?.count();
                ensure(BigUint::from(listed) == oracle, || {
                    format!("{spec} n = {n}: listed {listed}")
                })?;
                streamed += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} specs, {streamed} listings walked, {elapsed:.2?}",
        specs.len()
    ))
}

fn criterion_6() -> Check {
    let mut specs = MultisetSpec::builtins(2, 1);
    specs.push(MultisetSpec::gk_fg(3).unwrap());
    specs.push(MultisetSpec::gk(4).unwrap());
    specs.push(MultisetSpec::zeta(2).unwrap());
    specs.extend(random_customs(7, 20));
    let mut checks = 0;
    for spec in &specs {
        for order in [0, 1, 2, 17, 64, 133, 200] {
            let a = spec.coefficients(order);
            let b = recip_one_minus(&a, order).map_err(|e| e.to_string())?;
            ensure(a.one_minus().mul(&b) == TruncatedSeries::one(order), || {
                format!("{spec} N = {order}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} products checked"))
}

fn criterion_7() -> Check {
    let mut specs = MultisetSpec::builtins(2, 1);
    specs.push(MultisetSpec::zeta(2).unwrap());
    for spec in &specs {
        let b = b_sequence(spec, 120);
        for m in 0..=60 {
            for n in 0..=60 {
                ensure(b[m + n] >= &b[m] * &b[n], || {
                    format!("{spec}: m = {m}, n = {n}")
                })?;
            }
        }
    }
    Ok(format!("{} families, m, n <= 60", specs.len()))
}

fn criterion_8() -> Check {
    let mut notes = Vec::new();
    for (n, cap) in [(1u32, "0.645"), (2, "0.0824")] {
        let spec_text = format!("zeta:n={n}");
        let (out, _) = run(&["solve", &spec_text, "--format", "csv"]);
        let text = stdout_ok(&out)?;
        let (header, rows) = csv(&text);
        let row = rows.first().ok_or("no row")?;
        ensure(
            field(&header, row, "verdict") == "no-root-below-radius",
            || text.clone(),
        )?;
        ensure(field(&header, row, "rho") == "1/2", || "radius".into())?;
        let sup = rational(field(&header, row, "sup"));
        ensure(sup < rational(cap), || format!("zeta:n={n} sup {sup}"))?;
        // zeta(2n) - 1 by direct summation, well past float noise
        let zeta_minus_one: f64 = (2..2_000_000u64)
            .map(|k| (k as f64).powi(-2 * n as i32))
            .sum();
        ensure(rational_to_f64(&sup) < zeta_minus_one, || {
            "sup above zeta(2n) - 1".into()
        })?;
        let spec = MultisetSpec::parse(&spec_text).unwrap();
        let order = field(&header, row, "sup_order").parse().unwrap();
        verify(
            &spec,
            &RootBracket::NoRootBelowRadius {
                radius: rational("1/2"),
                sup: sup.clone(),
                order,
            },
        )
        .map_err(|e| e.to_string())?;
        notes.push(format!("n={n}: sup {:.6}", rational_to_f64(&sup)));
    }
    Ok(notes.join(", "))
}

fn criterion_9() -> Check {
    let fg = gap_profile(&MultisetSpec::fg_codim(), 301 * 301);
    let gaps = fg.support_gaps();
    ensure(gaps.len() >= 300, || format!("{} gaps", gaps.len()))?;
    for i in 1..=300usize {
        ensure(gaps[i - 1] == 2 * i as u64 + 1, || {
            format!("fg-codim gap {i} = {}", gaps[i - 1])
        })?;
    }
    // the same through the CLI, spot-checked
    let (out, _) = run(&["gaps", "fg-codim", "--bound", "90601", "--format", "csv"]);
    let text = stdout_ok(&out)?;
    let (header, rows) = csv(&text);
    for row in &rows {
        let i: u64 = field(&header, row, "i").parse().unwrap();
        let gap = field(&header, row, "gap");
        if i <= 300 {
            ensure(gap == (2 * i + 1).to_string(), || {
                format!("CLI gap {i} = {gap}")
            })?;
        }
    }

    let codim = gap_profile(&MultisetSpec::codim(), 2 * 51 * 51);
    for i in 1..=50u64 {
        let (lo, hi) = (2 * i * i, 2 * (i + 1) * (i + 1));
        let max_gap = codim.max_gap_within(lo, hi).unwrap_or(0);
        let need = (2 * (2 * i + 1)).div_ceil(3);
        ensure(max_gap >= need, || {
            format!("codim [{lo}, {hi}]: max gap {max_gap} < {need}")
        })?;
    }

    let fact = gap_profile(&MultisetSpec::factorial(), 5040);
    let ratios = fact.support_ratios();
    for i in 1..=6usize {
        let expected = BigRational::from_integer(BigInt::from(i + 1));
        ensure(ratios[i - 1] == expected, || {
            format!("factorial ratio {i} = {}", ratios[i - 1])
        })?;
    }
    Ok("fg-codim i <= 300, codim i <= 50, factorial i <= 6".into())
}

fn criterion_10() -> Check {
    let (out, _) = run(&["semigroup", "4", "9", "--format", "csv"]);
    let text = stdout_ok(&out)?;
    let (header, rows) = csv(&text);
    let row = rows.first().ok_or("no row")?;
    let frob: u64 = field(&header, row, "frobenius").parse().unwrap();
    let cond: u64 = field(&header, row, "conductor").parse().unwrap();
    // Sylvester: ab - a - b
    ensure(frob == 4 * 9 - 4 - 9 && cond == frob + 1, || {
        format!("frobenius {frob}, conductor {cond}")
    })?;
    let report = conductor(&[4, 9]).map_err(|e| e.to_string())?;
    ensure(report.frobenius == Some(23), || "library frobenius".into())?;

    let mut specs = MultisetSpec::builtins(2, 1);
    specs.push(MultisetSpec::gk_fg(3).unwrap());
    specs.push(MultisetSpec::gk(3).unwrap());
    specs.push(MultisetSpec::zeta(2).unwrap());
    let mut summary = Vec::new();
    for spec in &specs {
        let report = spec_semigroup(spec).map_err(|e| e.to_string())?;
        let limit = report.conductor as usize + 50;
        let b = b_sequence(spec, limit);
        for (n, count) in b.iter().enumerate() {
            ensure(
                report.is_representable(n as u64) == !count.is_zero(),
                || format!("{spec} n = {n}"),
            )?;
        }
        summary.push(format!("{spec}:{}", report.conductor));
    }
    Ok(format!("conductors {}", summary.join(" ")))
}

fn criterion_11() -> Check {
    let even = MultisetSpec::custom(CustomMultiset::new("even", vec![(2, 1), (4, 1)]).unwrap());
    let b = b_sequence(&even, 2000);
    ensure(b.iter().skip(1).step_by(2).all(Zero::is_zero), || {
        "odd b_n nonzero".into()
    })?;

    let eps = rational("1e-9");
    let bracket = solve_alpha(&even, &eps, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let (lo, hi) = beta_bracket(&bracket).map_err(|e| e.to_string())?;
    let beta = rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())));
    // substituting t^2 -> s gives s + s^2, whose beta is the golden ratio
    let substituted =
        MultisetSpec::custom(CustomMultiset::new("sub", vec![(1, 1), (2, 1)]).unwrap());
    let sub_bracket =
        solve_alpha(&substituted, &eps, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let (slo, shi) = beta_bracket(&sub_bracket).map_err(|e| e.to_string())?;
    let sub_beta = rational_to_f64(&((slo + shi) / BigRational::from_integer(2.into())));
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    ensure((sub_beta - phi).abs() < 1e-8, || {
        format!("substituted beta {sub_beta}")
    })?;
    ensure((beta * beta - sub_beta).abs() < 1e-8, || {
        format!("beta {beta} vs sqrt({sub_beta})")
    })?;

    let table = gcd_subsequence_roots(&even, 2000).map_err(|e| e.to_string())?;
    let errors: Vec<f64> = table
        .rows
        .iter()
        .filter_map(|r| r.root.map(|root| (r.n, (root - beta).abs())))
        .filter(|(n, _)| n % 2 == 0)
        .map(|(_, e)| e)
        .collect();
    ensure(table.rows.iter().all(|r| r.n % 2 == 0), || {
        "odd index in subsequence".into()
    })?;
    let last = *errors.last().ok_or("empty table")?;
    ensure(errors.windows(2).all(|w| w[1] <= w[0] + 1e-12), || {
        "distance to beta not monotone".into()
    })?;
    ensure(last < 1e-3, || format!("b_2000^(1/2000) off by {last}"))?;
    Ok(format!(
        "beta {beta:.9} = sqrt({sub_beta:.9}), final distance {last:.2e}"
    ))
}

fn criterion_12() -> Check {
    let start = Instant::now();
    let b = b_sequence(&MultisetSpec::fg_codim(), 2000);
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("b_sequence took {elapsed:?}")
    })?;
    // spot check against the listing oracle and the square-sum identity
    let oracle = count_by_enumeration_bounded(&MultisetSpec::fg_codim(), 120, 120)
        .map_err(|e| e.to_string())?;
    ensure(oracle == b[120], || "b_120 mismatch".into())?;
    for n in 100..=2000 {
        let sum: BigUint = (1..)
            .map(|k: usize| k * k)
            .take_while(|&sq| sq <= n)
            .map(|sq| &b[n - sq])
            .sum();
        ensure(sum == b[n], || format!("b_{n} breaks b_n = sum b_(n-k^2)"))?;
    }
    let (first, _) = run(&["roots", "fg-codim", "--order", "2000", "--format", "csv"]);
    let (second, _) = run(&["roots", "fg-codim", "--order", "2000", "--format", "csv"]);
    let text = stdout_ok(&first)?;
    ensure(first.stdout == second.stdout, || {
        "CSV differs between runs".into()
    })?;
    ensure(text.contains(&format!("\n2000,{},", b[2000])), || {
        "CLI b_2000 differs".into()
    })?;
    Ok(format!("b_2000 has {} bits, {elapsed:.2?}", b[2000].bits()))
}

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("roots table n <= 16", criterion_1),
        ("root at n = 24", criterion_2),
        ("certified alpha/beta for fg-codim", criterion_3),
        ("golden-ratio bracket", criterion_4),
        ("enumeration oracle equivalence", criterion_5),
        ("reciprocal identity", criterion_6),
        ("supermultiplicativity", criterion_7),
        ("zeta no-root path", criterion_8),
        ("gap structure", criterion_9),
        ("semigroup and positivity", criterion_10),
        ("gcd-d handling", criterion_11),
        ("performance and determinism", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
