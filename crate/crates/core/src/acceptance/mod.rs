//! Executable acceptance criteria. Each criterion compares library output
//! against a reference from [`oracles`] or against a closed-form value, and
//! reports one line.

pub mod oracles;

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compat::{check_compatibility, cone_sum, estimate_decay_exponents};
use crate::cones::{cone_separation_constant, count_growth_fit, intersection_count, uniform_directions, LatticeCone};
use crate::distributions::{
    from_closed_form, order_estimate, weighted_trace, ClosedFormSpec, CoefficientField, GridSamples,
};
use crate::error::Result;
use crate::lattice::{bracket, bracket_real, peetre_bound, MultiIndex};
use crate::product::{cauchy_product_direct, cauchy_product_fft};
use crate::shiftinv::{amalgam_norm, fiberize, si_product, synthesize, SampledGenerator, ShiftInvariantElement};
use crate::trace::{dyadic_radii, Verdict, TAIL_RATIO_MAX};
use crate::wavefront::{is_regular_at, sobolev_threshold, wavefront_scan, Signal};
use crate::window::{cardinal_bspline, LocalizationWindow};

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {} ({:.1} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "product oracle equivalence"),
    (2, "compatible products converge"),
    (3, "planar cone counting bound"),
    (4, "wave front thresholds"),
    (5, "Peetre inequality and cone separation"),
    (6, "fiberization isometry and shift commutation"),
    (7, "shift-invariant product synthesis"),
    (8, "invariant suites"),
];

/// Runs criterion `id` (1..=8) with the given seed.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionOutcome> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("no acceptance criterion {id}")))?;
    let start = Instant::now();
    let result = match id {
        1 => product_oracles(seed),
        2 => compatible_products(),
        3 => counting_bound(),
        4 => wavefront_thresholds(),
        5 => peetre_and_separation(seed),
        6 => fiberization(),
        7 => si_synthesis(seed),
        _ => invariant_suites(seed),
    };
    let (passed, detail) = match result {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(CriterionOutcome { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0, seed).expect("known criterion")).collect()
}

type Check = Result<(bool, String)>;

fn random_field(rng: &mut ChaCha8Rng, dim: usize, radius: usize) -> Result<CoefficientField> {
    CoefficientField::from_fn(dim, radius, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn product_oracles(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut fft_err, mut quad_err) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let dim = 1 + i % 2;
        let (n1, n2) = (rng.gen_range(1..=32), rng.gen_range(1..=32));
        let a = random_field(&mut rng, dim, n1)?;
        let b = random_field(&mut rng, dim, n2)?;
        let direct = cauchy_product_direct(&a, &b)?;
        fft_err = fft_err.max(cauchy_product_fft(&a, &b)?.max_abs_diff(&direct)?);
        if dim == 1 {
            for (k, c) in oracles::trig_product_quadrature(&a, &b) {
                quad_err = quad_err.max((direct.get(&[k]) - c).norm());
            }
        }
    }
    Ok((
        fft_err <= 1e-10 && quad_err <= 1e-10,
        format!("50 pairs, fft vs direct {fft_err:.2e}, quadrature vs direct {quad_err:.2e}"),
    ))
}

/// Inside/outside exponents of the constructed pairs on the standard cones.
const COMPATIBLE_PAIRS: [((f64, f64), (f64, f64)); 10] = [
    ((0.0, -10.0), (0.0, -10.0)),
    ((0.25, -10.0), (0.0, -10.0)),
    ((0.5, -9.0), (0.5, -9.0)),
    ((1.0, -10.0), (0.0, -8.0)),
    ((0.0, -8.0), (1.0, -10.0)),
    ((-0.5, -10.0), (0.5, -10.0)),
    ((0.75, -9.0), (0.25, -10.0)),
    ((1.0, -10.0), (1.0, -10.0)),
    ((0.5, -8.0), (-1.0, -9.0)),
    ((-1.0, -10.0), (-1.0, -10.0)),
];

fn compatible_products() -> Check {
    let (g1, g2) = LatticeCone::standard_pair();
    let mut worst_ratio = 0.0f64;
    let mut taus = (f64::INFINITY, f64::NEG_INFINITY);
    let mut failures = Vec::new();
    for (i, ((in1, out1), (in2, out2))) in COMPATIBLE_PAIRS.iter().enumerate() {
        let f1 = from_closed_form(
            &ClosedFormSpec::ConeSupported { cone: g1.clone(), inside_exp: *in1, outside_exp: *out1 },
            64,
        )?;
        let f2 = from_closed_form(
            &ClosedFormSpec::ConeSupported { cone: g2.clone(), inside_exp: *in2, outside_exp: *out2 },
            64,
        )?;
        let report = check_compatibility(&f1, std::slice::from_ref(&g1), &f2, std::slice::from_ref(&g2))?;
        let Some(tau) = report.tau.filter(|_| report.verdict) else {
            failures.push(format!("pair {i}: not compatible ({})", report.failures.join("; ")));
            continue;
        };
        taus = (taus.0.min(tau), taus.1.max(tau));
        let product = cauchy_product_fft(&f1, &f2)?;
        let trace = weighted_trace(&product, -tau, &dyadic_radii(128))?;
        worst_ratio = worst_ratio.max(trace.tail_ratio);
        if !trace.verdict.is_convergent() || trace.tail_ratio >= TAIL_RATIO_MAX {
            failures.push(format!("pair {i}: trace at tau = {tau} is {}", trace.verdict));
        }
    }
    let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 64)?;
    let comb_sq = cauchy_product_fft(&comb, &comb)?;
    let control = weighted_trace(&comb_sq, 0.0, &dyadic_radii(32))?;
    let slope = control.slope.unwrap_or(f64::NEG_INFINITY);
    if control.verdict != Verdict::Divergent || slope <= 0.2 {
        failures.push(format!("comb x comb: {} with slope {slope:.3}", control.verdict));
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "10 pairs convergent at tau in [{:.2}, {:.2}], worst tail ratio {worst_ratio:.2e}; comb x comb divergent, slope {slope:.2}",
                taus.0, taus.1
            )
        } else {
            failures.join(" | ")
        },
    ))
}

fn counting_bound() -> Check {
    let (g1, g2) = LatticeCone::standard_pair();
    let radii = [8, 16, 32, 64, 128];
    let fit = count_growth_fit(&g1, &g2, &uniform_directions(2, 16)?, &radii)?;
    let top = fit.max_ratio(2.0, 0.9 * 128.0, 1.1 * 128.0);
    let below = fit.max_ratio(2.0, 0.9 * 64.0, 1.1 * 64.0);
    let drift = (below / top - 1.0).abs();
    let mismatches = fit.samples.iter().filter(|s| oracles::naive_count(&g1, &g2, s.n.coords()) != s.count).count();
    Ok((
        fit.gamma_hat <= 2.1 && drift <= 0.25 && mismatches == 0,
        format!(
            "gamma_hat {:.3}, max c/|n|^2 at 64 vs 128: {below:.4} vs {top:.4} ({:.1}%), {} of {} counts differ from brute force",
            fit.gamma_hat,
            100.0 * drift,
            mismatches,
            fit.samples.len()
        ),
    ))
}

fn wavefront_thresholds() -> Check {
    let mut lines = Vec::new();
    let mut ok = true;
    let cases = [(ClosedFormSpec::SquareWave, "square wave", 0.5), (ClosedFormSpec::Sawtooth, "sawtooth", 0.0)];
    for (spec, name, x0) in cases {
        let field = Signal::Coefficients(from_closed_form(&spec, 256)?);
        let w = LocalizationWindow::new(vec![x0], 0.9, 0.2, 8)?;
        for dir in [1.0, -1.0] {
            let t = sobolev_threshold(&field, &[x0], &[dir], 0.3, &w, 128)?;
            ok &= (t.estimate - 0.5).abs() <= 0.1;
            lines.push(format!("{name} {dir:+} s* {:.3}", t.estimate));
        }
    }
    let spec = ClosedFormSpec::square_wave_in_x();
    let f = Signal::Samples(GridSamples::from_fn(2, 256, |t| spec.sample(t).expect("function"))?);
    let w = LocalizationWindow::new(vec![0.5, 0.5], 0.9, 0.2, 8)?;
    let report = wavefront_scan(&f, &[0.5, 0.5], 1.0, 16, 20.0, &w, 64)?;
    let mut bad = Vec::new();
    for d in report.non_regular() {
        let a = d.angle_deg().abs();
        let off_axis = a.min(180.0 - a);
        ok &= off_axis <= 25.0;
        bad.push(format!("{:.1}", d.angle_deg()));
        if off_axis < 1e-9 {
            ok &= (d.threshold.estimate - 0.5).abs() <= 0.15;
            lines.push(format!("2-D axis {:.0} deg s* {:.3}", d.angle_deg(), d.threshold.estimate));
        }
    }
    ok &= !bad.is_empty();
    lines.push(format!("non-regular angles [{}]", bad.join(", ")));
    Ok((ok, lines.join("; ")))
}

fn peetre_and_separation(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut violations = 0;
    let mut disagreements = 0;
    for _ in 0..100_000 {
        let d = rng.gen_range(1..=3);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-100.0..=100.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-100.0..=100.0)).collect();
        let r = rng.gen_range(-6.0..=6.0);
        let b = peetre_bound(&x, &y, r);
        if !b.holds() {
            violations += 1;
        }
        let (lhs, rhs) = oracles::peetre_sides(&x, &y, r);
        if (lhs - b.lhs).abs() > 1e-9 * lhs || (rhs - b.rhs).abs() > 1e-9 * rhs {
            disagreements += 1;
        }
    }
    let inner = LatticeCone::circular(&[1.0, 0.0], 15f64.to_radians())?;
    let outer = LatticeCone::circular(&[1.0, 0.0], 30f64.to_radians())?;
    let c100 = cone_separation_constant(&inner, &outer, 100)?;
    let c200 = cone_separation_constant(&inner, &outer, 200)?;
    let exact30 = cone_separation_constant(&inner, &outer, 30)?;
    let sampled30 = oracles::separation_by_sampling(15f64.to_radians(), 30f64.to_radians(), 30, 60, 240);
    let oracle_ok = sampled30 >= exact30 - 1e-12 && sampled30 <= exact30 * 1.02;
    let drift = (c200 / c100 - 1.0).abs();
    Ok((
        violations == 0 && disagreements == 0 && c100 > 0.0 && drift <= 0.1 && oracle_ok,
        format!(
            "1e5 triples, {violations} violations, {disagreements} oracle disagreements; separation {c100:.5} (R=100) vs {c200:.5} (R=200); R=30 exact {exact30:.5} vs sampled {sampled30:.5}"
        ),
    ))
}

fn gaussian(w: f64) -> Result<SampledGenerator> {
    Ok(SampledGenerator::from_fn(256, -3.0, 3.0, 0.0, |x| (-std::f64::consts::PI * x * x / (w * w)).exp())?
        .with_label(format!("gaussian {w}")))
}

fn bspline(m: usize, samples_per_unit: usize) -> Result<SampledGenerator> {
    let half = m as f64 / 2.0;
    Ok(SampledGenerator::from_fn(samples_per_unit, -half, half, 0.0, |x| cardinal_bspline(m, x))?
        .with_label(format!("bspline {m}")))
}

type Transform = Box<dyn Fn(f64) -> f64>;

fn fiberization() -> Check {
    const K: usize = 32;
    let corpus: Vec<(SampledGenerator, Transform)> = vec![
        (gaussian(0.25)?, Box::new(|xi| oracles::gaussian_hat(0.25, xi))),
        (gaussian(0.35)?, Box::new(|xi| oracles::gaussian_hat(0.35, xi))),
        (bspline(8, 256)?, Box::new(|xi| oracles::bspline_hat(8, xi))),
    ];
    let mut worst_iso = 0.0f64;
    let mut worst_shift = 0.0f64;
    for (g, hat) in &corpus {
        for s in [-1.0, 0.0, 1.0, 2.0] {
            let fm = fiberize(g, s, K)?;
            let exact = oracles::sobolev_norm(hat, s, -(K as f64), K as f64 + 1.0, 40_000);
            worst_iso = worst_iso.max((fm.h_norm() - exact).abs() / exact);
        }
        for s in [0.0, 1.0] {
            let base = fiberize(g, s, K)?;
            for j in -2..=2 {
                let shifted = fiberize(&g.translated(j), s, K)?;
                for row in 0..base.t_points {
                    let e = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 * base.t(row));
                    for k in -(K as i64)..=K as i64 {
                        worst_shift = worst_shift.max((shifted.entry(row, k) - e * base.entry(row, k)).norm());
                    }
                }
            }
        }
    }
    Ok((
        worst_iso <= 1e-5 && worst_shift <= 1e-8,
        format!("isometry rel. error {worst_iso:.2e}, shift commutation {worst_shift:.2e}"),
    ))
}

fn si_synthesis(seed: u64) -> Check {
    let m = 32;
    let gens = [bspline(2, m)?, bspline(3, m)?, bspline(4, m)?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
    let mut worst = 0.0f64;
    let mut coeff_mismatch = 0;
    let element = |rng: &mut ChaCha8Rng| -> Result<ShiftInvariantElement> {
        let r = rng.gen_range(1..=2);
        let mut g = Vec::new();
        let mut c = Vec::new();
        for _ in 0..r {
            g.push(gens[rng.gen_range(0..gens.len())].clone());
            let radius = rng.gen_range(1..=6);
            c.push(random_field(rng, 1, radius)?);
        }
        ShiftInvariantElement::new(g, c, 0.0)
    };
    let mut pairs = Vec::new();
    for _ in 0..20 {
        pairs.push((element(&mut rng)?, element(&mut rng)?));
    }
    let pair_step = CoefficientField::from_parts(1, 1, vec![0.0.into(), 1.0.into(), 1.0.into()])?;
    let delta = CoefficientField::from_parts(1, 0, vec![1.0.into()])?;
    pairs.push((
        ShiftInvariantElement::new(vec![gens[0].clone()], vec![pair_step], 0.0)?,
        ShiftInvariantElement::new(vec![gens[0].clone()], vec![delta], 0.0)?,
    ));
    for (g1, g2) in &pairs {
        let p = si_product(g1, g2, None)?.element;
        let got = synthesize(&p)?;
        let expect = oracles::direct_grid_convolution(&synthesize(g1)?, &synthesize(g2)?);
        worst = worst.max(got.l2_distance(&expect)? / expect.l2_norm());
        let mut idx = 0;
        for a in &g1.coefficients {
            for b in &g2.coefficients {
                if p.coefficients[idx] != cauchy_product_direct(a, b)? {
                    coeff_mismatch += 1;
                }
                idx += 1;
            }
        }
    }
    Ok((
        worst <= 1e-6 && coeff_mismatch == 0,
        format!("{} pairs, worst relative L2 error {worst:.2e}, {coeff_mismatch} coefficient mismatches", pairs.len()),
    ))
}

fn invariant_suites(seed: u64) -> Check {
    let mut failed: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failed.push(what.to_string());
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);

    // partition sums
    let hat = bspline(2, 32)?;
    let ones = CoefficientField::from_fn(1, 6, |_| 1.0.into())?;
    let f = synthesize(&ShiftInvariantElement::new(vec![hat.clone()], vec![ones], 0.0)?)?;
    check((-5 * 32..=5 * 32).all(|q| (f.at_index(q) - 1.0).norm() < 1e-13), "hat partition of unity");
    check((amalgam_norm(&hat) - 1.0).abs() < 1e-15, "amalgam norm of hat");
    let other = bspline(3, 32)?;
    let sum = add_generators(&hat, &other);
    check(
        amalgam_norm(&sum) <= amalgam_norm(&hat) + amalgam_norm(&other) + 1e-12
            && (amalgam_norm(&hat.scaled(-2.5)) - 2.5 * amalgam_norm(&hat)).abs() == 0.0,
        "amalgam norm homogeneity and triangle inequality",
    );
    let (g1, g2) = LatticeCone::standard_pair();
    let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 32)?;
    let radii = dyadic_radii(32);
    for s in [-1.5, -1.0, 0.0] {
        let inside = cone_sum(&comb, &g1, s, &radii, false)?;
        let outside = cone_sum(&comb, &g1, s, &radii, true)?;
        let total = weighted_trace(&comb, s, &radii)?;
        check(
            inside.sums.iter().zip(&outside.sums).zip(&total.sums).all(|((a, b), t)| ((a + b) - t).abs() <= 1e-10 * t),
            "cone sum plus complement equals total",
        );
    }

    // monotonicity in s
    let sq = Signal::Coefficients(from_closed_form(&ClosedFormSpec::SquareWave, 256)?);
    let w = LocalizationWindow::new(vec![0.5], 0.9, 0.2, 8)?;
    let mut diverged = false;
    for i in 0..=16 {
        let s = -1.0 + 0.25 * i as f64;
        let v = is_regular_at(&sq, &[0.5], &[1.0], s, 0.3, &w, 128)?;
        check(!(diverged && v != Verdict::Divergent), "divergent at s stays divergent for larger s");
        diverged |= v == Verdict::Divergent;
    }
    check(diverged, "square wave diverges for large s");
    let spec = ClosedFormSpec::square_wave_in_x();
    let sq2 = Signal::Samples(GridSamples::from_fn(2, 256, |t| spec.sample(t).expect("function"))?);
    let w2 = LocalizationWindow::new(vec![0.5, 0.5], 0.9, 0.2, 8)?;
    let scan = wavefront_scan(&sq2, &[0.5, 0.5], 1.0, 16, 20.0, &w2, 64)?;
    for d in &scan.directions {
        let first = d.grid_verdicts.iter().position(|v| *v == Verdict::Divergent);
        if let Some(i) = first {
            check(d.grid_verdicts[i..].iter().all(|v| *v == Verdict::Divergent), "scan grid verdicts monotone in s");
        }
    }

    // aperture monotonicity
    for u in uniform_directions(2, 16)? {
        let wide = is_regular_at(&sq2, &[0.5, 0.5], &u, 1.0, 20f64.to_radians(), &w2, 64)?;
        if wide.is_convergent() {
            for narrow in [10.0, 5.0] {
                let v = is_regular_at(&sq2, &[0.5, 0.5], &u, 1.0, f64::to_radians(narrow), &w2, 64)?;
                check(v.is_convergent(), "regular with a wide aperture stays regular when narrowed");
            }
        }
    }

    // window plateau invariance
    for s in [0.0, 1.0] {
        let verdicts: Vec<Verdict> = [0.2, 0.3, 0.4]
            .iter()
            .map(|&eps| {
                is_regular_at(&sq, &[0.5], &[1.0], s, 0.3, &LocalizationWindow::new(vec![0.5], 0.9, eps, 8)?, 128)
            })
            .collect::<Result<_>>()?;
        check(verdicts.iter().all(|v| *v == verdicts[0]), "verdicts agree across plateau widths");
    }

    // scaling invariance
    let f1 =
        from_closed_form(&ClosedFormSpec::ConeSupported { cone: g1.clone(), inside_exp: 0.5, outside_exp: -9.0 }, 64)?;
    let scaled = f1.scaled(Complex64::new(3.7, -2.0));
    let p = estimate_decay_exponents(&f1, &g1)?;
    let q = estimate_decay_exponents(&scaled, &g1)?;
    check((p.alpha, p.beta) == (q.alpha, q.beta), "decay exponents invariant under scaling");
    let (k0, _) = order_estimate(&f1, &dyadic_radii(64))?;
    let (k1, _) = order_estimate(&scaled, &dyadic_radii(64))?;
    check(k0 == k1, "order invariant under scaling");

    // exact arithmetic identities
    let a = random_field(&mut rng, 2, 9)?;
    let b = random_field(&mut rng, 2, 5)?;
    check(cauchy_product_direct(&a, &b)? == cauchy_product_direct(&b, &a)?, "direct product commutes exactly");
    for n in [[7i64, 3], [20, 20], [-3, 11], [40, 5]] {
        check(intersection_count(&g1, &g2, &n)? == intersection_count(&g2, &g1, &n)?, "count symmetry");
    }
    for _ in 0..1000 {
        let k = MultiIndex::new(vec![rng.gen_range(-500..=500), rng.gen_range(-500..=500)]);
        let s = rng.gen_range(-6.0..=6.0);
        check((bracket(&k, s) * bracket(&k, -s) - 1.0).abs() <= 1e-12, "bracket reciprocity");
        check(bracket_real(&[k.coords()[0] as f64, k.coords()[1] as f64], s) > 0.0, "bracket positive");
    }

    // file round trips
    let text = a.to_json()?;
    check(CoefficientField::from_json(&text)? == a, "coefficient JSON round trip");
    let round: CoefficientField = CoefficientField::from_json(&CoefficientField::from_json(&text)?.to_json()?)?;
    check(round.to_json()? == text, "coefficient JSON is stable");
    for cone in [g1.clone(), g2.clone(), LatticeCone::circular(&[0.3, 0.8, 0.5], 0.4)?] {
        check(LatticeCone::from_json(&cone.to_json()?)? == cone, "cone JSON round trip");
    }
    let gen = gaussian(0.3)?;
    let back = SampledGenerator::from_csv(&gen.to_csv(), 0.0)?;
    check(back.samples == gen.samples && back.start_index == gen.start_index, "generator CSV round trip");

    failed.dedup();
    Ok((
        failed.is_empty(),
        if failed.is_empty() {
            "partition sums, cone sums, s and aperture monotonicity, window and scaling invariance, exact identities, round trips".into()
        } else {
            format!("failed: {}", failed.join(", "))
        },
    ))
}

fn add_generators(a: &SampledGenerator, b: &SampledGenerator) -> SampledGenerator {
    let lo = a.start_index.min(b.start_index);
    let hi = (a.start_index + a.samples.len() as i64).max(b.start_index + b.samples.len() as i64);
    let samples = (lo..hi).map(|q| a.at_index(q) + b.at_index(q)).collect();
    SampledGenerator {
        samples_per_unit: a.samples_per_unit,
        start_index: lo,
        samples,
        smoothness: 0.0,
        label: String::new(),
    }
}
