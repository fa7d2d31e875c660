//! Subcommand implementations. Each returns its report text and whether it
//! found a domain failure; `main` maps that to the exit status.

use std::fmt::Write as _;

use doodle_core::cover::{double_cover, SELECTED_VARIANT};
use doodle_core::moves::{random_walk, WalkConfig};
use doodle_core::presentation::{dfds, fds, list_colorings, PresentationError};
use doodle_core::switch::{parse_table, verify_axioms, AxiomReport, EnumerateError};
use doodle_core::{col, dcol, enumerate_switches, FiniteDoodleSwitch, GaussCode};
use thiserror::Error;

use crate::inputs::{self, InputError, Named};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Listing(#[from] PresentationError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    /// A domain failure: axiom violation or invariance counterexample.
    pub failed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, failed: false }
    }
}

pub fn check_switch(arg: &str) -> Result<Report, CliError> {
    let (name, text) = inputs::switch_text(arg)?;
    let malformed = |e| {
        CliError::Input(InputError::Switch {
            name: name.clone(),
            source: e,
        })
    };
    let rows = parse_table(&text).map_err(|e| malformed(e.into()))?;
    match verify_axioms(&rows).map_err(|e| malformed(e.into()))? {
        AxiomReport::Valid => Ok(Report::ok(format!(
            "{name}: valid doodle switch of order {}\n",
            rows.len()
        ))),
        AxiomReport::Invalid(v) => Ok(Report {
            text: format!("{name}: {v}\n"),
            failed: true,
        }),
    }
}

pub fn enum_switches(order: usize, up_to_iso: bool, csv: bool) -> Result<Report, CliError> {
    let tables = enumerate_switches(order, up_to_iso)?;
    let mut out = String::new();
    if csv {
        let header: Vec<String> = (1..=order)
            .flat_map(|r| (1..=order).map(move |c| format!("m{r}{c}")))
            .collect();
        writeln!(out, "index,{}", header.join(",")).unwrap();
        for (i, t) in tables.iter().enumerate() {
            let cells: Vec<String> = t.rows().concat().iter().map(|v| v.to_string()).collect();
            writeln!(out, "{},{}", i + 1, cells.join(",")).unwrap();
        }
    } else {
        let kind = if up_to_iso { " up to isomorphism" } else { "" };
        writeln!(out, "# {} doodle switches of order {order}{kind}", tables.len()).unwrap();
        for (i, t) in tables.iter().enumerate() {
            write!(out, "\n# switch {}\n{}", i + 1, t.to_text()).unwrap();
        }
    }
    Ok(Report::ok(out))
}

/// One count per switch, for `col` or `dcol`.
pub fn count(diagram: &str, switches: &[String], doubled: bool, csv: bool) -> Result<Report, CliError> {
    let d = inputs::load_diagram(diagram)?;
    let sws = inputs::load_switches(switches)?;
    let inv = if doubled { "dcol" } else { "col" };
    let mut out = String::new();
    if csv {
        writeln!(out, "switch,{inv}").unwrap();
    }
    for sw in &sws {
        let n = if doubled {
            dcol(&d.value, &sw.value)
        } else {
            col(&d.value, &sw.value)
        };
        if csv {
            writeln!(out, "{},{n}", sw.name).unwrap();
        } else {
            writeln!(out, "{inv}({}, {}) = {n}", d.name, sw.name).unwrap();
        }
    }
    Ok(Report::ok(out))
}

pub fn list(diagram: &str, switch: &[String], doubled: bool, cap: u128) -> Result<Report, CliError> {
    let d = inputs::load_diagram(diagram)?;
    let sw = match switch {
        [one] => inputs::load_switch(one)?,
        _ => return Err(CliError::Usage("list-colorings needs exactly one --switch".into())),
    };
    let p = if doubled { dfds(&d.value) } else { fds(&d.value) };
    let colorings = list_colorings(&p, &sw.value, cap)?;
    let mut out = p.generators().join(",") + "\n";
    for c in colorings {
        let cells: Vec<String> = c.values.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(Report::ok(out))
}

/// CSV with one column per diagram: a `col` row per switch, then a `dcol` row
/// per switch.
pub fn table(diagrams: &[String], switches: &[String]) -> Result<Report, CliError> {
    let ds = inputs::load_diagrams(diagrams)?;
    let sws = inputs::load_switches(switches)?;
    let mut out = String::from("invariant");
    for d in &ds {
        out.push(',');
        out.push_str(&d.name);
    }
    out.push('\n');
    if ds.is_empty() {
        return Ok(Report::ok(out));
    }
    for doubled in [false, true] {
        for sw in &sws {
            let inv = if doubled { "dcol" } else { "col" };
            write!(out, "{inv}({})", sw.name).unwrap();
            for d in &ds {
                let n = if doubled {
                    dcol(&d.value, &sw.value)
                } else {
                    col(&d.value, &sw.value)
                };
                write!(out, ",{n}").unwrap();
            }
            out.push('\n');
        }
    }
    Ok(Report::ok(out))
}

/// Switches checked by `fuzz` when none are given: `T`, `T′`, `T″`, the
/// order-3 projection switch and every switch of order 3.
pub fn fuzz_battery() -> Result<Vec<Named<FiniteDoodleSwitch>>, CliError> {
    let mut b = inputs::load_switches(&[])?;
    b.push(Named {
        name: "proj3".into(),
        value: FiniteDoodleSwitch::projection(3),
    });
    for (i, value) in enumerate_switches(3, false)?.into_iter().enumerate() {
        b.push(Named {
            name: format!("order3#{}", i + 1),
            value,
        });
    }
    Ok(b)
}

pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    pub steps: usize,
}

/// Random walks checking that `col`, `dcol` and the coloring numbers of the
/// double covering do not change. Trial `i` walks with seed `seed + i`, so a
/// failure replays with `--seed <seed + i> --trials 1`.
pub fn fuzz(diagrams: &[String], switches: &[String], cfg: &FuzzConfig) -> Result<Report, CliError> {
    let ds = if diagrams.is_empty() {
        inputs::load_diagrams(&["U".into(), "d31".into()])?
    } else {
        inputs::load_diagrams(diagrams)?
    };
    let sws = if switches.is_empty() {
        fuzz_battery()?
    } else {
        inputs::load_switches(switches)?
    };
    let walk_cfg = WalkConfig::default();
    let mut out = String::new();
    writeln!(
        out,
        "# fuzz seed={} trials={} steps={} switches={}",
        cfg.seed,
        cfg.trials,
        cfg.steps,
        sws.len()
    )
    .unwrap();
    let signature = |code: &GaussCode| -> Vec<(u128, u128, u128)> {
        let cover = double_cover(code, SELECTED_VARIANT);
        sws.iter()
            .map(|sw| (col(code, &sw.value), dcol(code, &sw.value), col(&cover, &sw.value)))
            .collect()
    };
    for d in &ds {
        let start = signature(&d.value);
        for trial in 0..cfg.trials {
            let walk_seed = cfg.seed.wrapping_add(trial);
            let (end, events) = random_walk(&d.value, cfg.steps, walk_seed, &walk_cfg);
            let got = signature(&end);
            if let Some(i) = (0..sws.len()).find(|&i| got[i] != start[i]) {
                writeln!(
                    out,
                    "VIOLATION diagram={} trial={trial} walk-seed={walk_seed} switch={}",
                    d.name, sws[i].name
                )
                .unwrap();
                writeln!(out, "  (col, dcol, col of cover): {:?} -> {:?}", start[i], got[i]).unwrap();
                writeln!(out, "  start: {}\n  end:   {end}", d.value).unwrap();
                for e in &events {
                    writeln!(out, "  {e}").unwrap();
                }
                writeln!(
                    out,
                    "  replay: doodle fuzz '{}' --seed {walk_seed} --trials 1 --steps {}",
                    d.value, cfg.steps
                )
                .unwrap();
                return Ok(Report {
                    text: out,
                    failed: true,
                });
            }
        }
        writeln!(out, "{}: {} trials ok", d.name, cfg.trials).unwrap();
    }
    Ok(Report::ok(out))
}

pub fn cover(diagram: &str) -> Result<Report, CliError> {
    let d = inputs::load_diagram(diagram)?;
    let c = double_cover(&d.value, SELECTED_VARIANT);
    Ok(Report::ok(format!(
        "# double covering of {}, variant {SELECTED_VARIANT}\n{c}\n",
        d.name
    )))
}

/// First switch, by order and then enumeration index, separating the two
/// diagrams by `col` or else by `dcol`.
pub fn distinguish(first: &str, second: &str, max_order: usize) -> Result<Report, CliError> {
    let (d1, d2) = (inputs::load_diagram(first)?, inputs::load_diagram(second)?);
    for n in 1..=max_order {
        for (i, sw) in enumerate_switches(n, true)?.iter().enumerate() {
            for (inv, f) in [
                ("col", col as fn(&GaussCode, &FiniteDoodleSwitch) -> u128),
                ("dcol", dcol),
            ] {
                let (a, b) = (f(&d1.value, sw), f(&d2.value, sw));
                if a != b {
                    return Ok(Report::ok(format!(
                        "# {inv} distinguishes {} ({a}) from {} ({b}); switch {} of order {n} up to isomorphism\n{}",
                        d1.name,
                        d2.name,
                        i + 1,
                        sw.to_text()
                    )));
                }
            }
        }
    }
    Ok(Report::ok(format!(
        "no switch of order at most {max_order} distinguishes {} from {}\n",
        d1.name, d2.name
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn table_of_examples() {
        let r = table(&s(&["U", "d31"]), &[]).unwrap();
        let lines: Vec<&str> = r.text.lines().collect();
        assert_eq!(
            lines[..5],
            [
                "invariant,U,d31",
                "col(T),4,2",
                "col(Tprime),3,1",
                "col(Tdoubleprime),3,1",
                "dcol(T),16,16"
            ]
        );
        let d31 = doodle_core::assets::d31();
        let [_, t1, t2] = doodle_core::assets::example_switches();
        assert_eq!(lines[5], format!("dcol(Tprime),9,{}", dcol(&d31, &t1)));
        assert_eq!(lines[6], format!("dcol(Tdoubleprime),9,{}", dcol(&d31, &t2)));
        assert_eq!(lines.len(), 7);
        assert_eq!(table(&[], &[]).unwrap().text, "invariant\n");
    }

    #[test]
    fn inline_codes_and_counts() {
        let r = count("a a-", &s(&["T"]), false, false).unwrap();
        assert_eq!(r.text, "col(a a-, T) = 4\n");
        let r = count("d31", &s(&["T"]), true, true).unwrap();
        assert_eq!(r.text, "switch,dcol\nT,16\n");
        assert!(matches!(count("a b", &[], false, false), Err(CliError::Input(_))));
    }

    #[test]
    fn listing_has_generator_header() {
        let r = list("U", &s(&["T"]), false, 100).unwrap();
        assert_eq!(r.text, "s0\n1\n2\n3\n4\n");
        let r = list("U", &s(&["Tprime"]), true, 100).unwrap();
        assert!(r.text.starts_with("s0.o,s0.u\n"));
        assert_eq!(r.text.lines().count(), 10);
        assert!(matches!(list("U", &s(&["T"]), true, 10), Err(CliError::Listing(_))));
        assert!(matches!(list("U", &[], false, 10), Err(CliError::Usage(_))));
    }

    #[test]
    fn cover_and_distinguish() {
        assert!(cover("U").unwrap().text.ends_with("\no / o\n"));
        let r = distinguish("U", "d31", 4).unwrap();
        assert!(
            r.text.starts_with("# col distinguishes U (3) from d31 (1)"),
            "{}",
            r.text
        );
        let r = distinguish("U", "a a-", 4).unwrap();
        assert!(r.text.starts_with("no switch"));
        assert!(distinguish("d31", "d31", 3).unwrap().text.starts_with("no switch"));
    }

    #[test]
    fn enumeration_output() {
        let r = enum_switches(1, false, false).unwrap();
        assert_eq!(r.text, "# 1 doodle switches of order 1\n\n# switch 1\n1\n1\n");
        let r = enum_switches(2, false, true).unwrap();
        assert_eq!(r.text.lines().count(), 3);
        assert!(r.text.starts_with("index,m11,m12,m21,m22\n"));
    }

    #[test]
    fn short_fuzz_passes() {
        let cfg = FuzzConfig {
            seed: 1,
            trials: 2,
            steps: 10,
        };
        let r = fuzz(&[], &s(&["T"]), &cfg).unwrap();
        assert!(!r.failed, "{}", r.text);
        assert!(r.text.contains("d31: 2 trials ok"));
    }
}
