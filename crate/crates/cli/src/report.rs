//! CSV emission. Every number is printed with six significant digits in the
//! shortest of fixed or exponent notation, like C's `%g`.

use std::fmt::Write as _;

use lipbo::harness::RegretSummary;

pub const TABLE_HEADER: &str = "benchmark,policy,n_runs,mean_regret,var_regret,stderr";
pub const SWEEP_HEADER: &str = "benchmark,policy,n_explore,mean_regret,var_regret";
pub const SINGLE_HEADER: &str = "benchmark,policy,seed,budget,regret";
pub const WIDTH_HEADER: &str = "benchmark,policy,width,mean_regret,var_regret,stderr";

/// `%g` formatting with six significant digits.
pub fn format_g(x: f64) -> String {
    const PRECISION: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Exponent after rounding to the target precision, taken from Rust's own
    // correctly rounded exponent formatting.
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn table_csv(rows: &[RegretSummary]) -> String {
    csv(
        TABLE_HEADER,
        rows.iter().map(|s| {
            format!(
                "{},{},{},{},{},{}",
                s.benchmark,
                s.policy,
                s.n_runs,
                format_g(s.mean),
                format_g(s.variance),
                format_g(s.std_error)
            )
        }),
    )
}

pub fn sweep_csv(rows: &[RegretSummary]) -> String {
    csv(
        SWEEP_HEADER,
        rows.iter().map(|s| {
            format!(
                "{},{},{},{},{}",
                s.benchmark,
                s.policy,
                s.n_explore,
                format_g(s.mean),
                format_g(s.variance)
            )
        }),
    )
}

pub fn single_csv(rows: &[(RegretSummary, u64)]) -> String {
    csv(
        SINGLE_HEADER,
        rows.iter().map(|(s, seed)| {
            format!(
                "{},{},{},{},{}",
                s.benchmark,
                s.policy,
                seed,
                s.budget,
                format_g(s.mean)
            )
        }),
    )
}

pub fn width_csv(rows: &[(f64, RegretSummary)]) -> String {
    let mut out = String::from(WIDTH_HEADER);
    out.push('\n');
    for (w, s) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.benchmark,
            s.policy,
            format_g(*w),
            format_g(s.mean),
            format_g(s.variance),
            format_g(s.std_error)
        );
    }
    out
}
