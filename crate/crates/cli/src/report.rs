//! Deterministic report rendering. JSON reports are typed structs so the
//! field order is fixed by declaration, carry a schema tag and a full echo
//! of the effective inputs, and spell every rational as an exact
//! numerator/denominator pair. CSV flattens the result records under a
//! header row.

use num_traits::One;
use serde::Serialize;

use mixlab_core::{
    DefectRecord, GroupExpression, RatFunc, Rational, SUnitSolution, WindowOracleReport,
    WitnessRecord,
};

/// Schema tag carried by every JSON report.
pub const SCHEMA: &str = "mixlab/1";

/// An exact rational in wire form; numerator and denominator are decimal
/// strings so arbitrary precision survives any JSON reader.
#[derive(Serialize, Debug)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl RatJson {
    pub fn of(r: &Rational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

/// `num/den`, or just `num` for integers — the CSV spelling.
pub fn csv_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Quotes a CSV field only when it needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    quoted.join(",")
}

#[derive(Serialize, Debug)]
pub struct CylinderEcho {
    pub sites: Vec<String>,
    pub values: Vec<u16>,
}

#[derive(Serialize, Debug)]
pub struct SystemEcho {
    pub p: u16,
    pub d: usize,
    pub poly: String,
}

#[derive(Serialize, Debug)]
pub struct MeasureInput {
    #[serde(flatten)]
    pub system: SystemEcho,
    pub cylinders: Vec<CylinderEcho>,
}

#[derive(Serialize, Debug)]
pub struct MeasureReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: MeasureInput,
    pub cylinder_count: usize,
    pub measure: RatJson,
}

#[derive(Serialize, Debug)]
pub struct ScanInput {
    #[serde(flatten)]
    pub system: SystemEcho,
    pub shape: Vec<String>,
    pub values: Vec<u16>,
    pub n_lo: u32,
    pub n_hi: u32,
}

#[derive(Serialize, Debug)]
pub struct ScanRecord {
    pub n: u32,
    pub joint: RatJson,
    pub product: RatJson,
    pub defect: RatJson,
    pub witness_dim: usize,
}

#[derive(Serialize, Debug)]
pub struct ScanReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: ScanInput,
    pub records: Vec<ScanRecord>,
}

#[derive(Serialize, Debug)]
pub struct WitnessInput {
    #[serde(flatten)]
    pub system: SystemEcho,
    pub shape: Vec<String>,
    pub n_lo: u32,
    pub n_hi: u32,
}

#[derive(Serialize, Debug)]
pub struct WitnessReportRecord {
    pub n: u32,
    pub witness_dim: usize,
}

#[derive(Serialize, Debug)]
pub struct WitnessReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: WitnessInput,
    pub records: Vec<WitnessReportRecord>,
}

#[derive(Serialize, Debug)]
pub struct OracleInput {
    #[serde(flatten)]
    pub system: SystemEcho,
    pub cylinder: CylinderEcho,
    pub window: String,
    pub max_cells: u64,
}

#[derive(Serialize, Debug)]
pub struct OracleResult {
    pub window: String,
    pub cells: u64,
    pub image_size: u64,
    pub matching: bool,
    pub measure_estimate: RatJson,
    pub stabilized: bool,
}

#[derive(Serialize, Debug)]
pub struct OracleReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: OracleInput,
    pub result: OracleResult,
}

#[derive(Serialize, Debug)]
pub struct SunitEnumInput {
    pub gens: Vec<RatJson>,
    pub allow_sign: bool,
    pub coeffs: Vec<RatJson>,
    pub height: i64,
    pub max_candidates: u64,
}

#[derive(Serialize, Debug)]
pub struct ExpressionJson {
    pub exponents: Vec<i64>,
    pub negated: bool,
}

#[derive(Serialize, Debug)]
pub struct SolutionJson {
    pub values: Vec<RatJson>,
    pub expressions: Vec<ExpressionJson>,
    pub degenerate: bool,
}

#[derive(Serialize, Debug)]
pub struct SunitEnumReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: SunitEnumInput,
    pub count: usize,
    pub solutions: Vec<SolutionJson>,
}

#[derive(Serialize, Debug)]
pub struct SunitFamilyInput {
    pub gens: Vec<RatJson>,
    pub allow_sign: bool,
    pub coeffs: Vec<RatJson>,
    pub subset: Vec<usize>,
    pub height: i64,
    pub max_candidates: u64,
}

#[derive(Serialize, Debug)]
pub struct SunitFamilyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: SunitFamilyInput,
    pub count: u64,
}

#[derive(Serialize, Debug)]
pub struct SunitFrobeniusInput {
    pub p: u16,
    pub base: Vec<String>,
    pub steps: u32,
}

#[derive(Serialize, Debug)]
pub struct OrbitEntry {
    pub step: u32,
    pub components: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct SunitFrobeniusReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub input: SunitFrobeniusInput,
    pub orbit: Vec<OrbitEntry>,
}

pub fn render_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report)
        .expect("report structs serialize without fallible types");
    text.push('\n');
    text
}

pub fn expression_json(e: &GroupExpression) -> ExpressionJson {
    ExpressionJson {
        exponents: e.exponents.clone(),
        negated: e.negated,
    }
}

pub fn solution_json(s: &SUnitSolution) -> SolutionJson {
    SolutionJson {
        values: s.values.iter().map(RatJson::of).collect(),
        expressions: s.expressions.iter().map(expression_json).collect(),
        degenerate: s.degenerate,
    }
}

pub fn measure_csv(cylinder_count: usize, measure: &Rational) -> String {
    format!(
        "cylinder_count,measure\n{},{}\n",
        cylinder_count,
        csv_rational(measure)
    )
}

pub fn scan_csv(records: &[DefectRecord]) -> String {
    let mut out = String::from("n,joint,product,defect,witness_dim\n");
    for r in records {
        out.push_str(&csv_row(&[
            r.n.to_string(),
            csv_rational(&r.joint),
            csv_rational(&r.product),
            csv_rational(&r.defect),
            r.witness_dim.to_string(),
        ]));
        out.push('\n');
    }
    out
}

pub fn witness_csv(records: &[WitnessRecord]) -> String {
    let mut out = String::from("n,witness_dim\n");
    for r in records {
        out.push_str(&csv_row(&[r.n.to_string(), r.witness_dim.to_string()]));
        out.push('\n');
    }
    out
}

pub fn oracle_csv(report: &WindowOracleReport, cells: u64) -> String {
    let mut out = String::from("window,cells,image_size,matching,measure_estimate,stabilized\n");
    out.push_str(&csv_row(&[
        report.window.to_string(),
        cells.to_string(),
        report.image_size.to_string(),
        report.matching.to_string(),
        csv_rational(&report.measure_estimate),
        report.stabilized.to_string(),
    ]));
    out.push('\n');
    out
}

pub fn sunit_enum_csv(solutions: &[SUnitSolution]) -> String {
    let mut out = String::from("index,values,exponents,negations,degenerate\n");
    for (i, s) in solutions.iter().enumerate() {
        let values: Vec<String> = s.values.iter().map(csv_rational).collect();
        let exponents: Vec<String> = s
            .expressions
            .iter()
            .map(|e| {
                let coords: Vec<String> = e.exponents.iter().map(|x| x.to_string()).collect();
                format!("({})", coords.join(","))
            })
            .collect();
        let negations: Vec<String> = s
            .expressions
            .iter()
            .map(|e| e.negated.to_string())
            .collect();
        out.push_str(&csv_row(&[
            (i + 1).to_string(),
            values.join(";"),
            exponents.join(";"),
            negations.join(";"),
            s.degenerate.to_string(),
        ]));
        out.push('\n');
    }
    out
}

pub fn sunit_family_csv(subset: &[usize], height: i64, count: u64) -> String {
    let subset_text: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!(
        "subset,height,count\n{},{},{}\n",
        subset_text.join(";"),
        height,
        count
    )
}

pub fn sunit_frobenius_csv(orbit: &[Vec<RatFunc>]) -> String {
    let mut out = String::from("step,components\n");
    for (step, entry) in orbit.iter().enumerate() {
        let components: Vec<String> = entry.iter().map(|f| f.to_string()).collect();
        out.push_str(&csv_row(&[step.to_string(), components.join(";")]));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_render_exactly() {
        let r = Rational::new(3.into(), (-24).into());
        let j = RatJson::of(&r);
        assert_eq!((j.num.as_str(), j.den.as_str()), ("-1", "8"));
        assert_eq!(csv_rational(&r), "-1/8");
        assert_eq!(csv_rational(&Rational::from_integer(7.into())), "7");
    }

    #[test]
    fn csv_fields_quote_only_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("(0,0)"), "\"(0,0)\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn json_reports_keep_declaration_order() {
        let report = SunitFamilyReport {
            schema: SCHEMA,
            command: "sunit-family",
            input: SunitFamilyInput {
                gens: vec![RatJson::of(&Rational::from_integer(2.into()))],
                allow_sign: true,
                coeffs: vec![RatJson::of(&Rational::from_integer(1.into()))],
                subset: vec![2, 3],
                height: 1,
                max_candidates: 10,
            },
            count: 4,
        };
        let text = render_json(&report);
        let schema_at = text.find("\"schema\"").unwrap();
        let input_at = text.find("\"input\"").unwrap();
        let count_at = text.find("\"count\"").unwrap();
        assert!(schema_at < input_at && input_at < count_at);
        assert!(text.ends_with('\n'));
    }
}
