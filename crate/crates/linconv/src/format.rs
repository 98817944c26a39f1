//! Output formatting: C-style `%.17g` numbers and CSV writers.
//!
//! Seventeen significant digits round-trip every f64, so CSV output is a
//! lossless, byte-reproducible record.

use crate::solvers::{SolverTrace, TraceAux};

/// Formats like C's `%.17g`: decimal style when the exponent is in
/// `[-4, 17)`, scientific otherwise; trailing zeros trimmed; exponents
/// signed with at least two digits.
pub fn g17(x: f64) -> String {
    format_g(x, 17)
}

pub fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let p = precision.max(1);
    // Exponent after rounding to p significant digits.
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("float scientific form");
    let exp: i32 = exp.parse().expect("float exponent");
    if exp >= -4 && exp < p as i32 {
        let frac = (p as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{x:.frac$}");
        trim_zeros(&fixed)
    } else {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

/// Comment header carried by every CSV: tool version, seed, problem hash.
pub struct CsvMeta {
    pub seed: Option<u64>,
    pub problem_hash: String,
}

impl CsvMeta {
    pub fn header_line(&self) -> String {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "# linconv {} seed={} problem={}\n",
            env!("CARGO_PKG_VERSION"),
            seed,
            self.problem_hash
        )
    }
}

/// Hash identifying a problem spec in output headers (first 16 hex chars
/// of the SHA-256 of its canonical JSON).
pub fn problem_hash(canonical_json: &str) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(canonical_json.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..16].to_string()
}

/// Renders a trace as CSV with columns `k,gap,dist,resid` plus
/// method-specific aux columns.
pub fn trace_csv(trace: &SolverTrace, meta: &CsvMeta) -> String {
    let mut out = meta.header_line();
    let aux_headers: Vec<String> = match trace.rows.first().map(|r| &r.aux) {
        Some(TraceAux::Ppa { prox }) => (0..prox.len()).map(|i| format!("prox_{i}")).collect(),
        Some(TraceAux::Fbs { .. }) => vec!["s_tail".to_string()],
        Some(TraceAux::Nesterov { y, z, .. }) => {
            let mut h: Vec<String> = (0..y.len()).map(|i| format!("y_{i}")).collect();
            h.extend((0..z.len()).map(|i| format!("z_{i}")));
            h.push("phi".to_string());
            h
        }
        _ => Vec::new(),
    };
    out.push_str("k,gap,dist,resid");
    for h in &aux_headers {
        out.push(',');
        out.push_str(h);
    }
    out.push('\n');
    for row in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{}",
            row.k,
            g17(row.gap),
            g17(row.dist),
            g17(row.resid)
        ));
        match &row.aux {
            TraceAux::None => {}
            TraceAux::Ppa { prox } => {
                for v in prox {
                    out.push(',');
                    out.push_str(&g17(*v));
                }
            }
            TraceAux::Fbs { tail_sq_sum } => {
                out.push(',');
                out.push_str(&g17(*tail_sq_sum));
            }
            TraceAux::Nesterov { y, z, phi } => {
                for v in y.iter().chain(z.iter()) {
                    out.push(',');
                    out.push_str(&g17(*v));
                }
                out.push(',');
                out.push_str(&g17(*phi));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_c_conventions() {
        assert_eq!(g17(0.0), "0");
        assert_eq!(g17(-0.0), "-0");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(0.5), "0.5");
        assert_eq!(g17(0.36), "0.35999999999999999");
        assert_eq!(g17(100.0), "100");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1.5e20), "1.5e+20");
        assert_eq!(g17(f64::INFINITY), "inf");
        assert_eq!(g17(f64::NAN), "nan");
        assert_eq!(g17(-2.25), "-2.25");
    }

    #[test]
    fn g17_round_trips_f64() {
        for &x in &[
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02214076e23,
            -1.1e-300,
            0.1 + 0.2,
        ] {
            let s = g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn ppa_trace_csv_has_prox_columns() {
        use crate::problems::make_strongly_convex_quadratic;
        use crate::solvers::{ppa, SolverConfig};
        use nalgebra::{dvector, DMatrix};
        let m =
            make_strongly_convex_quadratic(DMatrix::identity(2, 2), dvector![0.0, 0.0]).unwrap();
        let trace = ppa(&m, 1.0, &SolverConfig::new(dvector![2.0, -2.0])).unwrap();
        let csv = trace_csv(
            &trace,
            &CsvMeta {
                seed: Some(3),
                problem_hash: "abc".into(),
            },
        );
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().contains("seed=3"));
        assert_eq!(lines.next().unwrap(), "k,gap,dist,resid,prox_0,prox_1");
        // First prox is x0/(1+λ) = (1, −1) up to the linear-solve ulp.
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        let p0: f64 = first[4].parse().unwrap();
        let p1: f64 = first[5].parse().unwrap();
        assert!((p0 - 1.0).abs() < 1e-12 && (p1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn hash_is_stable() {
        let h = problem_hash("{\"a\":1}");
        assert_eq!(h.len(), 16);
        assert_eq!(h, problem_hash("{\"a\":1}"));
        assert_ne!(h, problem_hash("{\"a\":2}"));
    }
}
