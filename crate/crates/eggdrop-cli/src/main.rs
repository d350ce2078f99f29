//! Command-line surface for the minimax drop-testing solver.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a violation, 2 on
//! argument errors.

use std::io::{self, BufRead, Write as _};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eggdrop::{
    ideal_tests, init_policy, map_policy_tree, simulate, solve_analytic, solve_binomial_bsearch,
    solve_dp_capacity, solve_dp_slow, DropOutcome, PolicyState, ProblemInstance, SolvePhase,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "eggdrop",
    version,
    about = "Exact minimax test budgets and optimal drop policies.\n\
             Threshold convention: the ground truth is the highest safe floor h in [0, N]; \
             an item dropped from floor f breaks exactly when f > h."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the minimum worst-case number of tests
    Solve {
        /// Number of candidate floors N
        #[arg(long)]
        floors: u64,
        /// Number of breakable test items K
        #[arg(long)]
        items: u32,
        /// Algorithm to run
        #[arg(long, value_enum, default_value_t = Algo::Analytic)]
        algo: Algo,
        /// Emit machine-readable JSON instead of the bare number
        #[arg(long)]
        json: bool,
    },
    /// Replay the optimal drop policy against a known threshold, or drive
    /// it interactively
    #[command(group(ArgGroup::new("policy_mode").required(true).args(["crit", "interactive"])))]
    Policy {
        #[arg(long)]
        floors: u64,
        #[arg(long)]
        items: u32,
        /// Ground-truth highest safe floor to replay against
        #[arg(long)]
        crit: Option<u64>,
        /// Ask for each drop outcome on standard input
        #[arg(long)]
        interactive: bool,
    },
    /// Map the full decision tree and print its statistics
    Map {
        #[arg(long)]
        floors: u64,
        #[arg(long)]
        items: u32,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Cross-check every solver and the policy over exhaustive grids;
    /// exits 1 on any violation
    Verify {
        /// Top of the floor grid (checked for every count from 0 up)
        #[arg(long)]
        max_floors: u64,
        /// Top of the item grid
        #[arg(long)]
        max_items: u32,
        /// Seed for the randomized large-instance sweep
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Time each algorithm and emit CSV (algo,floors,items,median_ns)
    Bench {
        /// Comma-separated floor counts
        #[arg(long, value_delimiter = ',', required = true)]
        floors_list: Vec<u64>,
        /// Comma-separated item counts
        #[arg(long, value_delimiter = ',', required = true)]
        items_list: Vec<u32>,
        /// Timed repetitions per cell
        #[arg(long, default_value_t = 5)]
        repeat: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Analytic,
    BinomialBsearch,
    Dp,
    DpCapacity,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Analytic => "analytic",
            Algo::BinomialBsearch => "binomial-bsearch",
            Algo::Dp => "dp",
            Algo::DpCapacity => "dp-capacity",
        }
    }
}

enum Failure {
    /// Bad arguments or unusable input: exit 2.
    Usage(String),
    /// Verification found violations: exit 1.
    Verification(u64),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(count)) => {
            eprintln!("verify: {count} check(s) failed");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            floors,
            items,
            algo,
            json,
        } => cmd_solve(floors, items, algo, json),
        Command::Policy {
            floors,
            items,
            crit,
            interactive,
        } => cmd_policy(floors, items, crit, interactive),
        Command::Map {
            floors,
            items,
            json,
        } => cmd_map(floors, items, json),
        Command::Verify {
            max_floors,
            max_items,
            seed,
        } => cmd_verify(max_floors, max_items, seed),
        Command::Bench {
            floors_list,
            items_list,
            repeat,
        } => cmd_bench(&floors_list, &items_list, repeat),
    }
}

fn instance(floors: u64, items: u32) -> Result<ProblemInstance, Failure> {
    ProblemInstance::new(floors, items).map_err(|e| Failure::Usage(e.to_string()))
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SolveReport {
    floors: u64,
    items: u32,
    algo: &'static str,
    t_star: u64,
    phase: Option<SolvePhase>,
    phase2_splits: Option<u32>,
    phase3_steps: Option<u32>,
}

fn cmd_solve(floors: u64, items: u32, algo: Algo, json: bool) -> Result<(), Failure> {
    let inst = instance(floors, items)?;
    let report = match algo {
        Algo::Analytic => {
            let outcome = solve_analytic(inst);
            SolveReport {
                floors,
                items,
                algo: algo.name(),
                t_star: outcome.t_star,
                phase: Some(outcome.phase),
                phase2_splits: Some(outcome.phase2_splits),
                phase3_steps: Some(outcome.phase3_steps),
            }
        }
        Algo::BinomialBsearch => SolveReport {
            floors,
            items,
            algo: algo.name(),
            t_star: solve_binomial_bsearch(inst),
            phase: None,
            phase2_splits: None,
            phase3_steps: None,
        },
        Algo::Dp => {
            if floors > 5000 || items > 16 {
                return Err(Failure::Usage(format!(
                    "--algo dp is desk-scale only (floors <= 5000, items <= 16); got N={floors}, K={items}"
                )));
            }
            SolveReport {
                floors,
                items,
                algo: algo.name(),
                t_star: solve_dp_slow(inst),
                phase: None,
                phase2_splits: None,
                phase3_steps: None,
            }
        }
        Algo::DpCapacity => {
            // the capacity table walks one test at a time; refuse instances
            // where that means billions of steps
            let t_star = solve_analytic(inst).t_star;
            if t_star > 50_000_000 {
                return Err(Failure::Usage(format!(
                    "--algo dp-capacity would iterate {t_star} times; pick a smaller instance"
                )));
            }
            SolveReport {
                floors,
                items,
                algo: algo.name(),
                t_star: solve_dp_capacity(inst),
                phase: None,
                phase2_splits: None,
                phase3_steps: None,
            }
        }
    };

    if json {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        println!("{}", report.t_star);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// policy
// ---------------------------------------------------------------------------

fn cmd_policy(
    floors: u64,
    items: u32,
    crit: Option<u64>,
    interactive: bool,
) -> Result<(), Failure> {
    let inst = instance(floors, items)?;
    let state = init_policy(inst).map_err(|e| Failure::Usage(e.to_string()))?;

    if interactive {
        return interactive_session(state);
    }

    let threshold = crit.expect("clap enforces one policy mode");
    if threshold > floors {
        return Err(Failure::Usage(format!(
            "--crit must lie in [0, {floors}]; got {threshold}"
        )));
    }

    let mut state = state;
    let mut step = 0u64;
    while state.resolved_threshold().is_none() {
        let floor = state.next_drop();
        let outcome = if floor > threshold {
            DropOutcome::Broke
        } else {
            DropOutcome::Survived
        };
        state = state.apply_outcome(floor, outcome);
        step += 1;
        println!(
            "drop {step}: floor {floor} -> {outcome} (tests left: {}, items left: {})",
            state.tests_left(),
            state.items_left()
        );
    }
    println!("highest safe floor: {}", state.resolved_threshold().unwrap());
    Ok(())
}

/// Drive the policy one drop at a time from outcomes typed on stdin.
/// Malformed answers re-prompt; end of input aborts with a usage error.
fn interactive_session(mut state: PolicyState) -> Result<(), Failure> {
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();

    while state.resolved_threshold().is_none() {
        let floor = state.next_drop();
        let outcome = loop {
            print!("Drop from floor {floor} - did it break? [y/n] ");
            io::stdout().flush().ok();
            let line = match lines.next() {
                Some(Ok(line)) => line,
                Some(Err(e)) => return Err(Failure::Usage(format!("cannot read input: {e}"))),
                None => {
                    return Err(Failure::Usage(
                        "input ended before the threshold was resolved".into(),
                    ))
                }
            };
            match line.trim().to_ascii_lowercase().as_str() {
                "y" | "yes" => break DropOutcome::Broke,
                "n" | "no" => break DropOutcome::Survived,
                _ => continue,
            }
        };
        state = state.apply_outcome(floor, outcome);
        println!(
            "tests left: {}, items left: {}",
            state.tests_left(),
            state.items_left()
        );
    }
    println!("highest safe floor: {}", state.resolved_threshold().unwrap());
    Ok(())
}

// ---------------------------------------------------------------------------
// map
// ---------------------------------------------------------------------------

fn cmd_map(floors: u64, items: u32, json: bool) -> Result<(), Failure> {
    let inst = instance(floors, items)?;
    if floors == 0 {
        return Err(Failure::Usage(
            "map needs at least one floor".into(),
        ));
    }
    let report = match map_policy_tree(inst) {
        Ok(report) => report,
        Err(defect) => {
            eprintln!("tree defect: {defect}");
            return Err(Failure::Verification(1));
        }
    };

    if json {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        println!("floors: {}, items: {}", report.floors, report.items);
        println!("t_star: {}", report.t_star);
        println!("total leaves: {}", report.total_leaves);
        println!(
            "max tests: {} (worst threshold: {})",
            report.max_tests, report.worst_threshold
        );
        println!("nodes visited: {}", report.nodes_visited);
        println!("depth histogram:");
        for (depth, count) in report.depth_histogram.iter().enumerate() {
            if *count > 0 {
                println!("  {depth:>4} tests: {count} threshold(s)");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyLog {
    failures: u64,
}

impl VerifyLog {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            eprintln!("FAIL: {}", what());
        }
    }
}

fn cmd_verify(max_floors: u64, max_items: u32, seed: u64) -> Result<(), Failure> {
    if max_items == 0 {
        return Err(Failure::Usage("--max-items must be at least 1".into()));
    }
    let mut log = VerifyLog { failures: 0 };
    let mut cells = 0u64;
    let mut simulations = 0u64;

    // 1. solver agreement and counter bounds over the full grid
    for items in 1..=max_items {
        for floors in 0..=max_floors {
            let inst = instance(floors, items)?;
            cells += 1;
            let outcome = solve_analytic(inst);
            let label = || format!("N={floors}, K={items}");

            log.check(
                outcome.t_star == solve_binomial_bsearch(inst),
                || format!("analytic vs binomial-bsearch at {}", label()),
            );
            log.check(
                outcome.t_star == solve_dp_capacity(inst),
                || format!("analytic vs dp-capacity at {}", label()),
            );
            if floors <= 5000 && items <= 16 {
                log.check(
                    outcome.t_star == solve_dp_slow(inst),
                    || format!("analytic vs dp at {}", label()),
                );
            }

            log.check(outcome.phase3_steps <= items, || {
                format!("phase 3 step bound at {}", label())
            });
            if floors >= 1 {
                let bound = ideal_tests(floors).div_ceil(items);
                log.check(outcome.phase2_splits <= bound, || {
                    format!("phase 2 split bound at {}", label())
                });
            }
            if let Some(terminal) = outcome.terminal {
                let clamp = u128::from(floors);
                log.check(terminal.capacity.meets(clamp), || {
                    format!("terminal capacity below floor count at {}", label())
                });
                let below = eggdrop::capacity_with_term(terminal.tests - 1, items, clamp).0;
                log.check(!below.meets(clamp), || {
                    format!("t_star not minimal at {}", label())
                });
            }
        }
        eprintln!("verify: solver grid items={items} done");
    }

    // 2. policy soundness: full tree per cell, whole traces on small cells
    for items in 1..=max_items {
        for floors in 1..=max_floors {
            let inst = instance(floors, items)?;
            let t_star = solve_analytic(inst).t_star;
            match map_policy_tree(inst) {
                Ok(report) => {
                    let label = || format!("N={floors}, K={items}");
                    log.check(report.total_leaves == floors + 1, || {
                        format!("leaf count at {}", label())
                    });
                    log.check(report.max_tests == t_star, || {
                        format!("tree depth vs t_star at {}", label())
                    });
                    log.check(report.nodes_visited <= 2 * (floors + 1), || {
                        format!("node count linearity at {}", label())
                    });
                }
                Err(defect) => {
                    log.failures += 1;
                    eprintln!("FAIL: tree defect at N={floors}, K={items}: {defect}");
                }
            }
            if floors <= 128 {
                for threshold in 0..=floors {
                    simulations += 1;
                    let trace = simulate(inst, threshold);
                    log.check(trace.identified == threshold, || {
                        format!("identification of h={threshold} at N={floors}, K={items}")
                    });
                    log.check(trace.tests_used <= t_star, || {
                        format!("test budget for h={threshold} at N={floors}, K={items}")
                    });
                    log.check(trace.breaks_used <= items, || {
                        format!("break budget for h={threshold} at N={floors}, K={items}")
                    });
                }
            }
        }
        eprintln!("verify: policy grid items={items} done");
    }

    // 3. seeded random large instances
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let magnitude: u32 = rng.random_range(0..=18);
        let upper = 10u64
            .pow(magnitude)
            .saturating_mul(10)
            .min(1_000_000_000_000_000_000);
        let floors = rng.random_range(1..=upper);
        let items = rng.random_range(1..=128);
        let inst = instance(floors, items)?;
        let outcome = solve_analytic(inst);
        log.check(
            outcome.t_star == solve_binomial_bsearch(inst),
            || format!("random instance N={floors}, K={items}"),
        );
        log.check(outcome.phase3_steps <= items, || {
            format!("phase 3 bound on random N={floors}, K={items}")
        });
    }
    eprintln!("verify: 1000 random instances done (seed {seed})");

    if log.failures == 0 {
        eprintln!(
            "verify: all checks passed ({cells} grid cells, {simulations} simulated traces)"
        );
        Ok(())
    } else {
        Err(Failure::Verification(log.failures))
    }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn median_ns(repeat: u32, mut run: impl FnMut() -> u64) -> u128 {
    let mut samples: Vec<u128> = (0..repeat)
        .map(|_| {
            let started = Instant::now();
            std::hint::black_box(run());
            started.elapsed().as_nanos()
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn cmd_bench(floors_list: &[u64], items_list: &[u32], repeat: u32) -> Result<(), Failure> {
    if repeat == 0 {
        return Err(Failure::Usage("--repeat must be at least 1".into()));
    }
    println!("algo,floors,items,median_ns");
    for &floors in floors_list {
        for &items in items_list {
            let inst = instance(floors, items)?;
            let t_star = solve_analytic(inst).t_star;

            let median = median_ns(repeat, || solve_analytic(inst).t_star);
            println!("analytic,{floors},{items},{median}");

            let median = median_ns(repeat, || solve_binomial_bsearch(inst));
            println!("binomial-bsearch,{floors},{items},{median}");

            // skip the iterative solvers where their own cost model says
            // the cell is out of reach
            if t_star <= 5_000_000 {
                let median = median_ns(repeat, || solve_dp_capacity(inst));
                println!("dp-capacity,{floors},{items},{median}");
            }
            if floors <= 5000 && items <= 16 {
                let median = median_ns(repeat, || solve_dp_slow(inst));
                println!("dp,{floors},{items},{median}");
            }
        }
    }
    Ok(())
}
