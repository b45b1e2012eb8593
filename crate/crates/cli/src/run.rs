//! Dispatch from a validated [`RunConfig`] to the engines and back out as a
//! rendered report plus an exit code.

use mixlab_core::{
    cylinder_measure, degenerate_family_count, dilation_scan, enumerate_solutions, frobenius_orbit,
    joint_measure, window_oracle, witness_scan, CylinderSpec, Rational, SystemSpec,
};

use crate::config::{CommandSpec, OutputFormat, RunConfig};
use crate::report::{
    self, CylinderEcho, MeasureInput, MeasureReport, OracleInput, OracleReport, OracleResult,
    OrbitEntry, RatJson, ScanInput, ScanRecord, ScanReport, SolutionJson, SunitEnumInput,
    SunitEnumReport, SunitFamilyInput, SunitFamilyReport, SunitFrobeniusInput,
    SunitFrobeniusReport, SystemEcho, WitnessInput, WitnessReport, WitnessReportRecord, SCHEMA,
};
use crate::CliError;

/// What an invocation produced: a process exit code, the rendered report on
/// success, and a message for stderr otherwise.
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Option<String>,
    pub error: Option<String>,
}

/// Executes a validated configuration. Never panics; failures come back as
/// an exit code plus message.
pub fn run(config: &RunConfig) -> RunOutcome {
    match execute(config) {
        Ok(report) => RunOutcome {
            exit_code: 0,
            report: Some(report),
            error: None,
        },
        Err(e) => RunOutcome {
            exit_code: e.exit_code(),
            report: None,
            error: Some(e.to_string()),
        },
    }
}

fn system_echo(system: &SystemSpec) -> SystemEcho {
    SystemEcho {
        p: system.modulus(),
        d: system.dim(),
        poly: system.relation().to_string(),
    }
}

fn cylinder_echo(cylinder: &CylinderSpec) -> CylinderEcho {
    CylinderEcho {
        sites: cylinder.sites().iter().map(|s| s.to_string()).collect(),
        values: cylinder.assignments().map(|(_, v)| v.value()).collect(),
    }
}

fn execute(config: &RunConfig) -> Result<String, CliError> {
    match &config.command {
        CommandSpec::Measure { system, cylinders } => {
            let measure = if cylinders.len() == 1 {
                cylinder_measure(system, &cylinders[0])?
            } else {
                joint_measure(system, cylinders)?
            };
            let value: &Rational = measure.value();
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&MeasureReport {
                    schema: SCHEMA,
                    command: "measure",
                    input: MeasureInput {
                        system: system_echo(system),
                        cylinders: cylinders.iter().map(cylinder_echo).collect(),
                    },
                    cylinder_count: cylinders.len(),
                    measure: RatJson::of(value),
                }),
                OutputFormat::Csv => report::measure_csv(cylinders.len(), value),
            })
        }
        CommandSpec::Scan {
            system,
            shape,
            values,
            lo,
            hi,
        } => {
            let records = dilation_scan(system, shape, values, *lo, *hi)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&ScanReport {
                    schema: SCHEMA,
                    command: "scan",
                    input: ScanInput {
                        system: system_echo(system),
                        shape: shape.points().iter().map(|s| s.to_string()).collect(),
                        values: values.iter().map(|v| v.value()).collect(),
                        n_lo: *lo,
                        n_hi: *hi,
                    },
                    records: records
                        .iter()
                        .map(|r| ScanRecord {
                            n: r.n,
                            joint: RatJson::of(&r.joint),
                            product: RatJson::of(&r.product),
                            defect: RatJson::of(&r.defect),
                            witness_dim: r.witness_dim,
                        })
                        .collect(),
                }),
                OutputFormat::Csv => report::scan_csv(&records),
            })
        }
        CommandSpec::Witness {
            system,
            shape,
            lo,
            hi,
        } => {
            let records = witness_scan(system, shape, *lo, *hi)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&WitnessReport {
                    schema: SCHEMA,
                    command: "witness",
                    input: WitnessInput {
                        system: system_echo(system),
                        shape: shape.points().iter().map(|s| s.to_string()).collect(),
                        n_lo: *lo,
                        n_hi: *hi,
                    },
                    records: records
                        .iter()
                        .map(|r| WitnessReportRecord {
                            n: r.n,
                            witness_dim: r.witness_dim,
                        })
                        .collect(),
                }),
                OutputFormat::Csv => report::witness_csv(&records),
            })
        }
        CommandSpec::Oracle {
            system,
            cylinder,
            window,
            max_cells,
        } => {
            let cells = window.cell_count();
            if cells > u128::from(*max_cells) {
                return Err(CliError::WorkBound(format!(
                    "window has {cells} cells, over the --max-cells bound {max_cells}"
                )));
            }
            let cells = cells as u64;
            let oracle = window_oracle(system, cylinder, window)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&OracleReport {
                    schema: SCHEMA,
                    command: "oracle",
                    input: OracleInput {
                        system: system_echo(system),
                        cylinder: cylinder_echo(cylinder),
                        window: window.to_string(),
                        max_cells: *max_cells,
                    },
                    result: OracleResult {
                        window: oracle.window.to_string(),
                        cells,
                        image_size: oracle.image_size,
                        matching: oracle.matching,
                        measure_estimate: RatJson::of(&oracle.measure_estimate),
                        stabilized: oracle.stabilized,
                    },
                }),
                OutputFormat::Csv => report::oracle_csv(&oracle, cells),
            })
        }
        CommandSpec::SunitEnum {
            equation,
            height,
            limits,
        } => {
            let solutions = enumerate_solutions(equation, *height, limits)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&SunitEnumReport {
                    schema: SCHEMA,
                    command: "sunit-enum",
                    input: SunitEnumInput {
                        gens: equation
                            .group()
                            .generators()
                            .iter()
                            .map(RatJson::of)
                            .collect(),
                        allow_sign: equation.group().allow_sign(),
                        coeffs: equation.coeffs().iter().map(RatJson::of).collect(),
                        height: *height,
                        max_candidates: limits.max_candidates,
                    },
                    count: solutions.len(),
                    solutions: solutions
                        .iter()
                        .map(report::solution_json)
                        .collect::<Vec<SolutionJson>>(),
                }),
                OutputFormat::Csv => report::sunit_enum_csv(&solutions),
            })
        }
        CommandSpec::SunitFamily {
            equation,
            subset,
            height,
            limits,
        } => {
            let count = degenerate_family_count(equation, subset, *height, limits)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&SunitFamilyReport {
                    schema: SCHEMA,
                    command: "sunit-family",
                    input: SunitFamilyInput {
                        gens: equation
                            .group()
                            .generators()
                            .iter()
                            .map(RatJson::of)
                            .collect(),
                        allow_sign: equation.group().allow_sign(),
                        coeffs: equation.coeffs().iter().map(RatJson::of).collect(),
                        subset: subset.clone(),
                        height: *height,
                        max_candidates: limits.max_candidates,
                    },
                    count,
                }),
                OutputFormat::Csv => report::sunit_family_csv(subset, *height, count),
            })
        }
        CommandSpec::SunitFrobenius { base, steps } => {
            let orbit = frobenius_orbit(base, *steps)?;
            Ok(match config.format {
                OutputFormat::Json => report::render_json(&SunitFrobeniusReport {
                    schema: SCHEMA,
                    command: "sunit-frobenius",
                    input: SunitFrobeniusInput {
                        p: base[0].modulus(),
                        base: base.iter().map(|f| f.to_string()).collect(),
                        steps: *steps,
                    },
                    orbit: orbit
                        .iter()
                        .enumerate()
                        .map(|(step, entry)| OrbitEntry {
                            step: step as u32,
                            components: entry.iter().map(|f| f.to_string()).collect(),
                        })
                        .collect(),
                }),
                OutputFormat::Csv => report::sunit_frobenius_csv(&orbit),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CommandSpec, OutputFormat, RunConfig};
    use mixlab_core::{parse_poly, SUnitEquation, SUnitGroup, SearchLimits};

    fn scan_config(format: OutputFormat) -> RunConfig {
        let system = SystemSpec::new(parse_poly("1+u1+u2", 2, 2).unwrap()).unwrap();
        let shape = mixlab_core::Shape::new(vec![
            mixlab_core::ExpVec::new(vec![0, 0]).unwrap(),
            mixlab_core::ExpVec::new(vec![1, 0]).unwrap(),
            mixlab_core::ExpVec::new(vec![0, 1]).unwrap(),
        ])
        .unwrap();
        let values = vec![
            mixlab_core::FpScalar::new(0, 2).unwrap(),
            mixlab_core::FpScalar::new(0, 2).unwrap(),
            mixlab_core::FpScalar::new(0, 2).unwrap(),
        ];
        RunConfig {
            command: CommandSpec::Scan {
                system,
                shape,
                values,
                lo: 1,
                hi: 4,
            },
            format,
            out: None,
        }
    }

    #[test]
    fn scan_csv_shows_the_dyadic_defects() {
        let outcome = run(&scan_config(OutputFormat::Csv));
        assert_eq!(outcome.exit_code, 0);
        let text = outcome.report.unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,joint,product,defect,witness_dim");
        assert_eq!(lines[1], "1,1/4,1/8,1/8,1");
        assert_eq!(lines[3], "3,1/8,1/8,0,0");
        assert_eq!(lines[4], "4,1/4,1/8,1/8,1");
    }

    #[test]
    fn scan_json_carries_schema_and_echo() {
        let outcome = run(&scan_config(OutputFormat::Json));
        let text = outcome.report.unwrap();
        assert!(text.contains("\"schema\": \"mixlab/1\""));
        // canonical text orders terms by exponent vector: (0,0),(0,1),(1,0)
        assert!(text.contains("\"poly\": \"1 + u2 + u1\""));
        assert!(text.contains("\"witness_dim\": 1"));
    }

    #[test]
    fn work_bound_breaches_exit_with_two() {
        let group = SUnitGroup::new(
            vec![
                Rational::from_integer(2.into()),
                Rational::from_integer(3.into()),
            ],
            false,
        )
        .unwrap();
        let equation = SUnitEquation::new(
            group,
            vec![
                Rational::from_integer(1.into()),
                Rational::from_integer(1.into()),
            ],
        )
        .unwrap();
        let config = RunConfig {
            command: CommandSpec::SunitEnum {
                equation,
                height: 3,
                limits: SearchLimits { max_candidates: 5 },
            },
            format: OutputFormat::Json,
            out: None,
        };
        let outcome = run(&config);
        assert_eq!(outcome.exit_code, 2);
        assert!(outcome.report.is_none());
        assert!(outcome.error.unwrap().contains("work bound"));
    }
}
