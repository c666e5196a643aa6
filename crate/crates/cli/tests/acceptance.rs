//! Acceptance suite: one PASS/FAIL line per criterion, tolerances and
//! runtime budgets pinned here independently of the verify reports.

use std::process::Command;
use std::time::{Duration, Instant};

use bosepair::verify::{self, Check, HBAR_SCALES};
use bosepair_core::special::zeta;

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

struct Criterion {
    failures: Vec<String>,
    detail: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            detail: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: String) {
        if !ok {
            self.failures.push(what);
        }
    }

    /// `checks[name].measured < tol`, strictly.
    fn below(&mut self, checks: &[Check], name: &str, tol: f64) {
        match checks.iter().find(|c| c.name == name) {
            Some(c) => {
                self.detail.push(format!("{name}={:.3e}", c.measured));
                self.require(c.measured < tol, format!("{name} = {:e} not < {tol:e}", c.measured));
            }
            None => self.failures.push(format!("{name} missing")),
        }
    }

    fn exact(&mut self, checks: &[Check], name: &str) {
        match checks.iter().find(|c| c.name == name) {
            Some(c) => {
                self.detail.push(format!("{name}={:e}", c.measured));
                self.require(c.measured == 0.0, format!("{name} = {:e} not exactly 0", c.measured));
            }
            None => self.failures.push(format!("{name} missing")),
        }
    }
}

fn measure<F>(id: u32, title: &'static str, budget: Option<Duration>, f: F) -> Outcome
where
    F: FnOnce(&mut Criterion) -> Result<(), String>,
{
    let mut c = Criterion::new();
    let start = Instant::now();
    if let Err(e) = f(&mut c) {
        c.failures.push(e);
    }
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            c.failures.push(format!("runtime {elapsed:?} exceeds budget {b:?}"));
        }
    }
    Outcome {
        id,
        title,
        failures: c.failures,
        detail: c.detail.join(" "),
        elapsed,
        budget,
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn run_verify(dir: &std::path::Path, suite: &str, seed: &str) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_bosepair"))
        .args(["verify", "--suite", suite, "--seed", seed, "--out"])
        .arg(dir)
        .env_remove("BOSEPAIR_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("verify --suite {suite} exited with {:?}", o.status.code()));
    }
    std::fs::read(dir.join(verify::report_file_name(suite))).map_err(|e| e.to_string())
}

fn main() {
    let e = |x: bosepair::CliError| x.to_string();
    let mut all = Vec::new();

    all.push(measure(1, "zeta(3/2) and ideal-gas T_c of 4He", Some(Duration::from_millis(100)), |c| {
        let z = zeta(1.5).map_err(|x| x.to_string())?;
        c.detail.push(format!("zeta={z:.9}"));
        c.require(format!("{z:.6}") == "2.612375", format!("zeta(3/2) = {z} does not round to 2.612375"));
        let checks = verify::constants().map_err(e)?;
        c.below(&checks, "zeta_3_2", 5e-7);
        c.below(&checks, "tc_he4", 0.01);
        Ok(())
    }));

    all.push(measure(2, "switch-off reduces to the ideal gas", secs(30), |c| {
        let checks = verify::switch_off().map_err(e)?;
        c.below(&checks, "switch_off.structure_factor", 1e-12);
        c.below(&checks, "switch_off.energy", 1e-8);
        c.below(&checks, "switch_off.ln_partition", 1e-10);
        Ok(())
    }));

    all.push(measure(3, "Bogoliubov limit at T = 1e-3 T_c", secs(10), |c| {
        let checks = verify::bogoliubov().map_err(e)?;
        c.below(&checks, "bogoliubov.structure_factor", 1e-6);
        c.below(&checks, "bogoliubov.energy", 1e-9);
        Ok(())
    }));

    all.push(measure(4, "classical RPA limit under hbar scaling", secs(60), |c| {
        let checks = verify::classical_limit().map_err(e)?;
        for what in ["structure_factor", "energy", "ln_partition"] {
            let devs: Vec<f64> = HBAR_SCALES
                .iter()
                .map(|l| {
                    checks
                        .iter()
                        .find(|x| x.name == format!("classical.{what}.lambda_{l}"))
                        .map_or(f64::NAN, |x| x.measured)
                })
                .collect();
            let shown: Vec<String> = devs.iter().map(|d| format!("{d:.2e}")).collect();
            c.detail.push(format!("{what}=[{}]", shown.join(",")));
            c.require(devs.windows(2).all(|w| w[1] < w[0]), format!("{what} not strictly decreasing: {devs:?}"));
            let last = devs[devs.len() - 1];
            c.require(last < 1e-3, format!("{what} at lambda = 0.03 is {last:e}"));
        }
        Ok(())
    }));

    all.push(measure(5, "energy equals -d ln Z / d beta", secs(60), |c| {
        let checks = verify::thermo_consistency().map_err(e)?;
        c.below(&checks, "consistency.energy_vs_dlnz_dbeta", 1e-5);
        Ok(())
    }));

    all.push(measure(6, "ds0/dbeta against finite differences", secs(30), |c| {
        let checks = verify::ds0_gradient().map_err(e)?;
        c.below(&checks, "consistency.ds0_dbeta", 1e-5);
        Ok(())
    }));

    all.push(measure(7, "coefficient system second relation", secs(1), |c| {
        let checks = verify::coefficient_system().map_err(e)?;
        c.below(&checks, "coefficients.second_relation", 1e-12);
        Ok(())
    }));

    all.push(measure(8, "density-matrix laboratory, N = 3", secs(120), |c| {
        let checks = verify::density_matrix(2024).map_err(e)?;
        c.exact(&checks, "dm.switch_off");
        c.exact(&checks, "dm.hermiticity");
        c.exact(&checks, "dm.permutation_symmetry");
        c.below(&checks, "dm.classical_diagonal_ratio", 1e-3);
        c.below(&checks, "dm.penrose_ratio_identity", 1e-10);
        c.below(&checks, "dm.ground_state_factorization", 1e-6);
        Ok(())
    }));

    all.push(measure(9, "effective-mass chain and self-consistent 4He", secs(30), |c| {
        let checks = verify::mass_chain(2024).map_err(e)?;
        c.below(&checks, "mass.reduction_chain", 1e-12);
        c.exact(&checks, "mass.ordering");
        c.below(&checks, "mass.self_consistent.residual", 1e-8);
        c.below(&checks, "mass.self_consistent.iterations", 200.0);
        Ok(())
    }));

    all.push(measure(10, "verify reports are byte-identical", None, |c| {
        let d = tempfile::tempdir().map_err(|x| x.to_string())?;
        for (suite, seed) in [("density-matrix", "17"), ("mass", "17"), ("consistency", "17")] {
            let a = run_verify(&d.path().join("a"), suite, seed)?;
            let b = run_verify(&d.path().join("b"), suite, seed)?;
            c.detail.push(format!("{suite}:{}B", a.len()));
            c.require(a == b, format!("{suite} reports differ"));
        }
        Ok(())
    }));

    let info = verify::classical_deviation(5.0, 0.03);
    for o in &all {
        let budget = o.budget.map_or("none".to_string(), |b| format!("{b:?}"));
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2}: {} [{:.3?} / budget {budget}] {}",
            o.id, o.title, o.elapsed, o.detail
        );
        for f in &o.failures {
            println!("      {f}");
        }
    }
    if let Ok(d) = info {
        println!("info: classical deviations at T = 5 K, lambda = 0.03: S {:.2e}, E {:.2e}, ln Z {:.2e}", d[0], d[1], d[2]);
    }
    let failed = all.iter().filter(|o| !o.failures.is_empty()).count();
    println!("acceptance: {} of {} criteria passed", all.len() - failed, all.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
