//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test --test acceptance`; everything here is
//! single-threaded so the timing bounds are meaningful.

use std::time::Instant;

use neurolds_core::bench::{
    basket_price, borehole, integrate, mc_estimate, sensitivity, weights_from_sensitivity, BasketOptionSpec,
    BoreholeSpec, REFERENCE_SAMPLES, REFERENCE_SEED,
};
use neurolds_core::discrepancy::{discrepancy_all_prefixes, prefix_loss, prefix_loss_grad};
use neurolds_core::hash::split_seed;
use neurolds_core::neuralnet::{EncodingConfig, MlpModel};
use neurolds_core::rrt::{
    rep_rotation, rrt_plan, ChainEnv, ChainGeometry, Environment, RrtConfig, RrtError, SampleSource,
};
use neurolds_core::trainer::{NoClock, SequentialEvaluator, Trainer};
use neurolds_core::{
    KernelFamily, KernelSpec, PointBuffer, PrefixScheme, PrefixWeights, Sequence, SequenceKind, SequenceSpec,
    TrainConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Default)]
struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{tag}] {name}: {detail}");
        if !pass {
            self.failed.push(id);
        }
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointBuffer {
    let coords = (0..n * d).map(|_| rng.random::<f64>()).collect();
    PointBuffer::from_flat(n, d, coords).unwrap()
}

fn sequence_points(kind: SequenceKind, dim: usize, burn_in: u64, n: usize) -> PointBuffer {
    let spec = SequenceSpec::new(kind, dim).with_burn_in(burn_in);
    Sequence::new(&spec).unwrap().generate(n).unwrap()
}

// ---------------------------------------------------------------------------
// Independent discrepancy oracle: kernels written out from their
// definitions, b and c by piecewise Simpson quadrature (exact here because
// every kernel is a quadratic in y between its kinks at x and 1/2).

fn kernel_1d(family: KernelFamily, x: f64, y: f64) -> f64 {
    match family {
        KernelFamily::Star => 1.0 - if x > y { x } else { y },
        KernelFamily::Ext => (if x < y { x } else { y }) - x * y,
        KernelFamily::Per => 0.5 - (x - y).abs() + (x - y).powi(2),
        KernelFamily::Ctr => ((x - 0.5).abs() + (y - 0.5).abs() - (x - y).abs()) / 2.0,
        KernelFamily::Sym => (1.0 - 2.0 * (x - y).abs()) / 4.0,
        KernelFamily::Asd => (1.0 - (x - y).abs()) / 2.0,
    }
}

fn simpson_pieces(f: impl Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[1] - w[0]) / 6.0 * (f(w[0]) + 4.0 * f(0.5 * (w[0] + w[1])) + f(w[1])))
        .sum()
}

fn oracle_b(family: KernelFamily, x: f64) -> f64 {
    simpson_pieces(|y| kernel_1d(family, x, y), &[0.0, x, 0.5, 1.0])
}

fn oracle_c(family: KernelFamily) -> f64 {
    simpson_pieces(|x| oracle_b(family, x), &[0.0, 0.5, 1.0])
}

/// `D(P)` from the plain double sum, for one prefix length.
fn oracle_discrepancy(family: KernelFamily, gamma: Option<&[f64]>, pts: &PointBuffer, p: usize) -> f64 {
    let d = pts.dim();
    let lift = |j: usize, v: f64| match gamma {
        Some(g) => 1.0 + g[j] * v,
        None => v,
    };
    let c: f64 = (0..d).map(|j| lift(j, oracle_c(family))).product();
    let mut sum_b = 0.0;
    let mut sum_k = 0.0;
    for i in 0..p {
        let xi = pts.row(i);
        sum_b += (0..d).map(|j| lift(j, oracle_b(family, xi[j]))).product::<f64>();
        for l in 0..p {
            let xl = pts.row(l);
            sum_k += (0..d)
                .map(|j| lift(j, kernel_1d(family, xi[j], xl[j])))
                .product::<f64>();
        }
    }
    let pf = p as f64;
    (c - 2.0 * sum_b / pf + sum_k / (pf * pf)).max(0.0).sqrt()
}

fn criterion_1(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for set in 0..100 {
        let n = rng.random_range(1..=64);
        let d = rng.random_range(1..=5);
        let pts = random_points(&mut rng, n, d);
        // Every other set also checks the product-weighted form.
        let gamma: Option<Vec<f64>> = (set % 2 == 1).then(|| (0..d).map(|_| rng.random_range(0.01..2.0)).collect());
        for family in KernelFamily::ALL {
            let spec = match &gamma {
                Some(g) => KernelSpec::weighted(family, g.clone()).unwrap(),
                None => KernelSpec::new(family),
            };
            let curve = discrepancy_all_prefixes(&spec, &pts).unwrap();
            for p in 1..=n {
                let want = oracle_discrepancy(family, gamma.as_deref(), &pts, p);
                let rel = (curve[p - 1] - want).abs() / want.max(1e-300);
                worst = worst.max(rel);
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    r.line(
        1,
        "incremental all-prefix vs double sums",
        worst <= 1e-10 && secs < 10.0,
        format!("max rel err {worst:.2e} (tol 1e-10), {secs:.2} s (limit 10 s)"),
    );
}

// ---------------------------------------------------------------------------

const TABLE_N: [usize; 6] = [100, 500, 1000, 2000, 5000, 10000];
const HALTON_COLUMN: [f64; 6] = [0.005020, 0.001608, 0.001002, 0.000550, 0.000278, 0.000168];
const SOBOL_COLUMN: [f64; 6] = [0.004840, 0.001615, 0.000972, 0.000527, 0.000282, 0.000167];

fn table_check(kind: SequenceKind, column: &[f64; 6]) -> (f64, f64, Vec<f64>) {
    let t = Instant::now();
    let pts = sequence_points(kind, 4, 128, 10_000);
    let curve = discrepancy_all_prefixes(&KernelSpec::new(KernelFamily::Sym), &pts).unwrap();
    let got: Vec<f64> = TABLE_N.iter().map(|&n| curve[n - 1]).collect();
    let worst = got
        .iter()
        .zip(column)
        .map(|(g, w)| (g - w).abs() / w)
        .fold(0.0, f64::max);
    (worst, t.elapsed().as_secs_f64(), got)
}

fn fmt_column(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join("/")
}

fn criterion_2(r: &mut Report) {
    let (worst, secs, got) = table_check(SequenceKind::Halton, &HALTON_COLUMN);
    r.line(
        2,
        "Halton d=4 prefix D2-sym",
        worst <= 0.01 && secs < 30.0,
        format!(
            "N=100..10000 gives {}, max rel dev {:.3}% (tol 1%), {secs:.2} s (limit 30 s)",
            fmt_column(&got),
            100.0 * worst
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let (worst, secs, got) = table_check(SequenceKind::Sobol, &SOBOL_COLUMN);
    let note = if worst <= 0.05 {
        String::new()
    } else {
        "; deviation attributed to the direction-number set (embedded Joe-Kuo new-joe-kuo-6.21201)".to_string()
    };
    r.line(
        3,
        "Sobol' d=4 prefix D2-sym",
        worst <= 0.05,
        format!(
            "N=100..10000 gives {}, max rel dev {:.3}% (tol 5%), {secs:.2} s{note}",
            fmt_column(&got),
            100.0 * worst
        ),
    );
}

// ---------------------------------------------------------------------------

fn near_kink(family: KernelFamily, pts: &PointBuffer, m: usize, j: usize, margin: f64) -> bool {
    let x = pts.row(m)[j];
    (0..pts.n_points()).any(|i| i != m && (pts.row(i)[j] - x).abs() < margin)
        || (family == KernelFamily::Ctr && (x - 0.5).abs() < margin)
}

fn criterion_4(r: &mut Report) {
    let h = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (n, d) = (16, 3);
    let mut worst_loss = 0.0f64;
    for _ in 0..50 {
        let pts = random_points(&mut rng, n, d);
        for family in KernelFamily::ALL {
            let spec = KernelSpec::new(family);
            for weights in [PrefixWeights::uniform(n), PrefixWeights::length_proportional(n)] {
                let grad = prefix_loss_grad(&spec, &weights, &pts).unwrap();
                let mut fd = vec![0.0; n * d];
                let mut skip = vec![false; n * d];
                for m in 0..n {
                    for j in 0..d {
                        let k = m * d + j;
                        skip[k] = near_kink(family, &pts, m, j, 1e-4);
                        let mut plus = pts.coords().to_vec();
                        let mut minus = plus.clone();
                        plus[k] += h;
                        minus[k] -= h;
                        let lp = prefix_loss(&spec, &weights, &PointBuffer::from_flat(n, d, plus).unwrap()).unwrap();
                        let lm = prefix_loss(&spec, &weights, &PointBuffer::from_flat(n, d, minus).unwrap()).unwrap();
                        fd[k] = (lp - lm) / (2.0 * h);
                    }
                }
                let scale = fd.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for k in 0..n * d {
                    if !skip[k] {
                        worst_loss = worst_loss.max((grad[k] - fd[k]).abs() / scale);
                    }
                }
            }
        }
    }

    // Tiny networks, scalar loss Σ c ⊙ f(i) with random c.
    let mut worst_mlp = 0.0f64;
    for seed in 0..5u64 {
        let enc = EncodingConfig::new(3, 12).unwrap();
        let mut model = MlpModel::init(enc, 6, 3, 2, seed).unwrap();
        // Zero initial biases put dead units exactly on the ReLU kink.
        for l in model.layers_mut() {
            l.bias.iter_mut().for_each(|b| *b = rng.random_range(-0.1..0.1));
        }
        let idx: Vec<u64> = (1..=12).collect();
        let c: Vec<f64> = (0..idx.len() * 2).map(|_| rng.random_range(-1.0..1.0)).collect();
        let loss = |m: &MlpModel| -> f64 { m.forward(&idx).coords().iter().zip(&c).map(|(x, w)| x * w).sum() };
        let cache = model.forward_cached(&idx);
        let grads = model.backward(&cache, &c).unwrap();
        let analytic: Vec<f64> = grads.iter().collect();
        let mut fd = Vec::with_capacity(analytic.len());
        for li in 0..model.n_layers() {
            let (nw, nb) = {
                let l = &model.layers()[li];
                (l.weights.len(), l.bias.len())
            };
            for p in 0..nw + nb {
                let probe = |m: &mut MlpModel, delta: f64| {
                    let l = &mut m.layers_mut()[li];
                    if p < nw {
                        l.weights[p] += delta;
                    } else {
                        l.bias[p - nw] += delta;
                    }
                };
                probe(&mut model, h);
                let lp = loss(&model);
                probe(&mut model, -2.0 * h);
                let lm = loss(&model);
                probe(&mut model, h);
                fd.push((lp - lm) / (2.0 * h));
            }
        }
        assert_eq!(fd.len(), analytic.len());
        let scale = fd.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (a, f) in analytic.iter().zip(&fd) {
            worst_mlp = worst_mlp.max((a - f).abs() / scale);
        }
    }
    r.line(
        4,
        "analytic gradients vs central differences",
        worst_loss <= 1e-5 && worst_mlp <= 1e-5,
        format!("prefix loss max rel err {worst_loss:.2e}, MLP max rel err {worst_mlp:.2e} (tol 1e-5)"),
    );
}

// ---------------------------------------------------------------------------

fn mean_prefix_sym(points: &PointBuffer) -> (f64, f64) {
    let curve = discrepancy_all_prefixes(&KernelSpec::new(KernelFamily::Sym), points).unwrap();
    let tail = &curve[1..];
    (tail.iter().sum::<f64>() / tail.len() as f64, curve[curve.len() - 1])
}

fn criteria_5_and_6(r: &mut Report) {
    let t = Instant::now();
    let n = 256;
    let (sobol_mean, _) = mean_prefix_sym(&sequence_points(SequenceKind::Sobol, 2, 128, n));
    let trainer = Trainer {
        clock: &NoClock,
        evaluator: &SequentialEvaluator,
    };
    let idx: Vec<u64> = (1..=n as u64).collect();
    let mut mse_ok = true;
    let mut beats_sobol = 0;
    let mut length_not_worse = 0;
    let mut lines5 = Vec::new();
    let mut lines6 = Vec::new();
    for seed in 0..3u64 {
        let mut cfg = TrainConfig::for_loss(KernelFamily::Sym, 2, n);
        cfg.hidden = 128;
        cfg.layers = 4;
        cfg.bands = 16;
        cfg.seed = seed;
        let init = trainer.init_model(&cfg).unwrap();
        let pre = trainer.pretrain(&cfg, init).unwrap();
        mse_ok &= pre.loss <= 1e-4;

        let uniform = trainer.finetune(&cfg, pre.model.clone()).unwrap();
        let (mean_u, last_u) = mean_prefix_sym(&uniform.model.forward(&idx));
        beats_sobol += (mean_u < sobol_mean) as usize;

        let mut cfg_len = cfg.clone();
        cfg_len.prefix = PrefixScheme::LengthProportional;
        let length = trainer.finetune(&cfg_len, pre.model.clone()).unwrap();
        let (_, last_l) = mean_prefix_sym(&length.model.forward(&idx));
        length_not_worse += (last_l <= last_u) as usize;

        lines5.push(format!("seed {seed}: mse {:.2e}, mean {mean_u:.5}", pre.loss));
        lines6.push(format!("seed {seed}: {last_l:.5} vs {last_u:.5}"));
    }
    let secs = t.elapsed().as_secs_f64();
    r.line(
        5,
        "desk-scale training beats Sobol' prefix mean",
        mse_ok && beats_sobol >= 2 && secs < 900.0,
        format!(
            "Sobol' mean {sobol_mean:.5}; {}; {beats_sobol}/3 below (need 2), pretrain mse ≤ 1e-4: {mse_ok}, {secs:.0} s (limit 900 s incl. criterion 6)",
            lines5.join("; ")
        ),
    );
    r.line(
        6,
        "length-proportional weights at P=N",
        length_not_worse >= 2,
        format!(
            "D(P=N) length vs uniform: {}; {length_not_worse}/3 not worse (need 2)",
            lines6.join("; ")
        ),
    );
}

// ---------------------------------------------------------------------------

fn criterion_7(r: &mut Report) {
    let d = 4;
    let mut violations = 0;
    for seed in 0..8u64 {
        let spec = SequenceSpec::new(SequenceKind::ScrambledSobol, d).with_seed(seed);
        let pts = Sequence::new(&spec).unwrap().generate(256).unwrap();
        for m in 0..=8u32 {
            let n = 1usize << m;
            for j in 0..d {
                let mut count = vec![0u32; n];
                for row in pts.prefix(n).rows() {
                    count[(row[j] * n as f64) as usize] += 1;
                }
                violations += count.iter().filter(|&&c| c != 1).count();
            }
        }
    }
    r.line(
        7,
        "Owen-scrambled Sobol' dyadic stratification",
        violations == 0,
        format!("d={d}, m=0..8, 8 seeds: {violations} bins without exactly one point"),
    );
}

const PUBLISHED_GAMMA: [f64; 8] = [1.0, 0.001, 0.001, 0.0633, 0.001, 0.0634, 0.0610, 0.0158];

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let spec = BoreholeSpec::default();
    let res = sensitivity(|u| borehole(u, &spec).unwrap(), 8, 1 << 13, 0).unwrap();
    let gamma = weights_from_sensitivity(&res, 0.001).unwrap();
    let worst = gamma
        .iter()
        .zip(PUBLISHED_GAMMA)
        .map(|(g, p)| (g - p).abs())
        .fold(0.0, f64::max);
    let s1 = res.first_order[0];
    let secs = t.elapsed().as_secs_f64();
    r.line(
        8,
        "Borehole sensitivity and weights",
        (0.78..=0.88).contains(&s1) && worst <= 0.01 && secs < 60.0,
        format!(
            "S1(r_w) = {s1:.4} (need [0.78, 0.88]), γ = [{}], max |Δγ| {worst:.4} (tol 0.01), {secs:.2} s",
            gamma.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>().join(", ")
        ),
    );
}

fn criterion_9(r: &mut Report) {
    let spec = BoreholeSpec::default();
    let f = |u: &[f64]| borehole(u, &spec).unwrap();
    let reference = mc_estimate(f, 8, REFERENCE_SAMPLES, REFERENCE_SEED).unwrap();
    let sobol = Sequence::new(&SequenceSpec::new(SequenceKind::Sobol, 8)).unwrap();
    let err = integrate(&sobol, f, 500, &[500], Some(reference)).unwrap().checkpoints[0]
        .abs_error
        .unwrap();
    // MC baselines use seeds split_seed(2021, k), k = 1..=32.
    let mc_mean = (1..=32u64)
        .map(|k| (mc_estimate(f, 8, 500, split_seed(REFERENCE_SEED, k)).unwrap() - reference).abs())
        .sum::<f64>()
        / 32.0;
    r.line(
        9,
        "Borehole integration at N=500",
        err < mc_mean,
        format!("reference {reference:.4} (2^21 MC, seed 2021); Sobol' error {err:.4} vs MC mean error {mc_mean:.4}"),
    );
}

fn criterion_10(r: &mut Report) {
    let spec = BasketOptionSpec::default_for(2);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let paths = 1_000_000;
    let (t, rate) = (spec.maturity, spec.rate);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let s: Vec<f64> = (0..2).map(|_| rng.random_range(0.1..1.0)).collect();
        let closed = basket_price(&s, &spec).unwrap();
        let mut payoff = 0.0;
        for _ in 0..paths {
            let z: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let mut log_g = 0.0;
            for (i, &s_i) in s.iter().enumerate() {
                let row = &spec.sigma[i * 2..i * 2 + 2];
                let var: f64 = row.iter().map(|v| v * v).sum();
                let shock: f64 = row.iter().zip(z).map(|(v, z)| v * z).sum();
                log_g += (s_i.ln() + (rate - 0.5 * var) * t + t.sqrt() * shock) / 2.0;
            }
            payoff += (log_g.exp() - spec.strike).max(0.0);
        }
        let mc = (-rate * t).exp() * payoff / paths as f64;
        worst = worst.max((closed - mc).abs() / mc.abs());
    }
    r.line(
        10,
        "basket price vs GBM simulation",
        worst < 5e-4,
        format!("10 initial prices, 10^6 paths each: max rel diff {worst:.2e} (tol 5e-4, 3 significant digits)"),
    );
}

// ---------------------------------------------------------------------------

struct Open {
    start: Vec<f64>,
    goal: Vec<f64>,
}

impl Environment for Open {
    fn dim(&self) -> usize {
        self.start.len()
    }
    fn start(&self) -> &[f64] {
        &self.start
    }
    fn goal(&self) -> &[f64] {
        &self.goal
    }
    fn in_collision(&self, _: &[f64]) -> bool {
        false
    }
}

struct Toward(Vec<f64>);

impl SampleSource for Toward {
    fn sample(&mut self, _: usize, out: &mut [f64]) -> Result<(), RrtError> {
        out.copy_from_slice(&self.0);
        Ok(())
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn tree_bytes(t: &neurolds_core::rrt::Tree) -> Vec<u8> {
    let mut out = Vec::new();
    for v in t.nodes.coords() {
        out.extend(v.to_le_bytes());
    }
    for p in &t.parents {
        out.extend(p.map_or(u64::MAX, |p| p as u64).to_le_bytes());
    }
    out
}

fn criterion_11(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    // Open space: straight-line extension toward the goal.
    let mut open_ok = 0;
    for _ in 0..50 {
        let start: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let goal: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let cfg = RrtConfig {
            max_iterations: 1000,
            step: 0.02,
            goal_tolerance: 0.0,
        };
        let bound = (dist(&start, &goal) / cfg.step).ceil() as usize + 1;
        let env = Open { start, goal };
        let res = rrt_plan(&env, &cfg, &mut Toward(env.goal.clone())).unwrap();
        open_ok += (res.success() && res.iterations <= bound) as usize;
    }
    let whole = Open {
        start: vec![0.3; 4],
        goal: vec![0.9; 4],
    };
    let cfg_whole = RrtConfig {
        max_iterations: 10,
        step: 0.02,
        goal_tolerance: 2.0,
    };
    let mut halton = Sequence::new(&SequenceSpec::new(SequenceKind::Halton, 4)).unwrap();
    let first = rrt_plan(&whole, &cfg_whole, &mut halton).unwrap().iterations == 1;

    // Fixed environment and sequence: identical trees, whether the samples
    // come from the generator or from a precomputed buffer.
    let geometry = ChainGeometry::default();
    let cfg = RrtConfig::default();
    let env = ChainEnv::new(geometry, 0.6, rep_rotation(7, 0)).unwrap();
    let buffer = sequence_points(SequenceKind::Halton, 4, 0, cfg.max_iterations);
    let a = rrt_plan(&env, &cfg, &mut &buffer).unwrap();
    let b = rrt_plan(&env, &cfg, &mut &buffer).unwrap();
    let c = rrt_plan(&env, &cfg, &mut halton).unwrap();
    let deterministic = tree_bytes(&a.tree) == tree_bytes(&b.tree) && tree_bytes(&a.tree) == tree_bytes(&c.tree);

    // Path invariants over a 20-rep sweep.
    let mut successes = 0;
    let mut bad_paths = 0;
    let mut runs = 0;
    for (i, kind) in [SequenceKind::Halton, SequenceKind::Sobol, SequenceKind::Uniform]
        .into_iter()
        .enumerate()
    {
        let mut spec = SequenceSpec::new(kind, 4);
        if kind.is_randomized() {
            spec = spec.with_seed(split_seed(11, 1 + i as u64));
        }
        let samples = Sequence::new(&spec).unwrap().generate(cfg.max_iterations).unwrap();
        for width in [0.64, 0.60] {
            for rep in 0..20 {
                let env = ChainEnv::new(geometry, width, rep_rotation(split_seed(11, 0), rep)).unwrap();
                let res = rrt_plan(&env, &cfg, &mut &samples).unwrap();
                runs += 1;
                let Some(path) = &res.path else { continue };
                successes += 1;
                let rows: Vec<&[f64]> = path.rows().collect();
                let mut valid = rows[0] == env.start()
                    && dist(rows[rows.len() - 1], env.goal()) <= cfg.goal_tolerance
                    && res.iterations <= cfg.max_iterations;
                for w in rows.windows(2) {
                    valid &= dist(w[0], w[1]) <= cfg.step + 1e-12;
                }
                for q in &rows {
                    valid &= q.iter().all(|v| (0.0..=1.0).contains(v)) && !env.in_collision(q);
                }
                bad_paths += (!valid) as usize;
            }
        }
    }
    r.line(
        11,
        "RRT properties",
        open_ok == 50 && first && deterministic && bad_paths == 0 && successes > 0,
        format!(
            "open space {open_ok}/50 within ceil(dist/δ)+1, whole-space goal at iteration 1: {first}, \
             byte-identical trees: {deterministic}, sweep {successes}/{runs} successes with {bad_paths} invalid paths"
        ),
    );
}

fn criterion_12(r: &mut Report) {
    let pts = sequence_points(SequenceKind::Halton, 4, 0, 10_000);
    let t = Instant::now();
    let curve = discrepancy_all_prefixes(&KernelSpec::new(KernelFamily::Sym), &pts).unwrap();
    let secs = t.elapsed().as_secs_f64();
    r.line(
        12,
        "all-prefix D2-sym, N=10^4, d=4, one thread",
        secs <= 10.0 && curve.len() == 10_000,
        format!("{secs:.2} s (limit 10 s)"),
    );
}

fn main() {
    // Nothing to list for `cargo test -- --list`.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut r = Report::default();
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criteria_5_and_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    criterion_11(&mut r);
    criterion_12(&mut r);
    if r.failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {:?}", r.failed);
        std::process::exit(1);
    }
}
