//! CSV output.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::harness::{MetricsRecord, OracleRow};
use crate::schedulers::{served_count, system_throughput, Algorithm, ScheduleResult};

pub const METRICS_HEADER: &str =
    "algorithm,sweep_variable,sweep_value,runs,mean_served,std_served,mean_throughput_bps,std_throughput_bps";

pub const SCHEDULE_HEADER: &str = "ue,sbs,qos_bps,alloc_access_slots,updated_access_slots,alloc_backhaul_slots,access_throughput_bps,backhaul_throughput_bps,served";

pub const ORACLE_HEADER: &str = "instance,seed,optimum,mqr,msnr,riab,explored";

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn g6(x: f64) -> String {
    format_sig(x, 6)
}

pub fn write_metrics_csv(mut w: impl Write, records: &[MetricsRecord]) -> io::Result<()> {
    writeln!(w, "{METRICS_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.sweep_variable,
            g6(r.sweep_value),
            r.runs,
            g6(r.mean_served),
            g6(r.std_served),
            g6(r.mean_throughput),
            g6(r.std_throughput)
        )?;
    }
    Ok(())
}

/// Parses a metrics CSV written by [`write_metrics_csv`].
pub fn parse_metrics_csv(text: &str) -> Result<Vec<MetricsRecord>> {
    let bad = |line: usize, what: &str| Error::config("csv", format!("line {line}: {what}"));
    let mut lines = text.lines();
    if lines.next() != Some(METRICS_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let n = i + 2;
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 8 {
                return Err(bad(n, "expected 8 columns"));
            }
            let num = |c: &str| c.parse::<f64>().map_err(|_| bad(n, "non-numeric value"));
            Ok(MetricsRecord {
                algorithm: cols[0].parse::<Algorithm>()?,
                sweep_variable: cols[1].parse()?,
                sweep_value: num(cols[2])?,
                runs: cols[3].parse().map_err(|_| bad(n, "bad run count"))?,
                mean_served: num(cols[4])?,
                std_served: num(cols[5])?,
                mean_throughput: num(cols[6])?,
                std_throughput: num(cols[7])?,
            })
        })
        .collect()
}

/// Per-UE table of a single schedule.
pub fn write_schedule_csv(mut w: impl Write, result: &ScheduleResult) -> io::Result<()> {
    writeln!(w, "{SCHEDULE_HEADER}")?;
    for (k, u) in result.ues.iter().enumerate() {
        let sbs = u.sbs.map_or_else(String::new, |l| l.to_string());
        let (alloc_access, alloc_backhaul) = match (u.sbs, u.demand) {
            (Some(_), Some(d)) => (d.alloc_access.to_string(), d.alloc_backhaul.to_string()),
            _ => (String::new(), String::new()),
        };
        writeln!(
            w,
            "{k},{sbs},{},{alloc_access},{},{alloc_backhaul},{},{},{}",
            g6(u.qos),
            u.access_slots,
            g6(u.access_throughput),
            g6(u.backhaul_throughput),
            u.served
        )?;
    }
    Ok(())
}

/// Human-readable summary of a single schedule.
pub fn write_schedule_summary(mut w: impl Write, result: &ScheduleResult) -> io::Result<()> {
    let load = result.access_load();
    writeln!(w, "algorithm:          {}", result.algorithm)?;
    writeln!(w, "UEs:                {}", result.ues.len())?;
    writeln!(w, "served UEs:         {}", served_count(result))?;
    writeln!(
        w,
        "dropped (backhaul): {}",
        result.ues.iter().filter(|u| u.pruned).count()
    )?;
    writeln!(w, "system throughput:  {} Gbit/s", g6(system_throughput(result) / 1e9))?;
    writeln!(w, "access slots used:  {:?} of {} per SBS", load, result.frame.n_access)?;
    writeln!(
        w,
        "backhaul slots:     {} of {}",
        result.backhaul_load(),
        result.frame.m_backhaul
    )
}

pub fn write_oracle_csv(mut w: impl Write, rows: &[OracleRow]) -> io::Result<()> {
    writeln!(w, "{ORACLE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.instance, r.seed, r.optimum, r.mqr, r.msnr, r.riab, r.explored
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepVariable;
    use proptest::prelude::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(161.24, 6), "161.24");
        assert_eq!(format_sig(543.0e9, 6), "5.43e11");
        assert_eq!(format_sig(2.0, 6), "2");
        assert_eq!(format_sig(0.8, 6), "0.8");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(format_sig(123456.4, 6), "123456");
        assert_eq!(format_sig(1.0 / 3.0, 6), "0.333333");
        assert_eq!(format_sig(-2.5e-7, 6), "-2.5e-7");
        assert_eq!(format_sig(999999.7, 6), "1e6");
    }

    #[test]
    fn metrics_round_trip() {
        let records = vec![MetricsRecord {
            algorithm: Algorithm::Msnr,
            sweep_variable: SweepVariable::PtAccess,
            sweep_value: 0.8,
            runs: 50,
            mean_served: 112.5,
            std_served: 6.25,
            mean_throughput: 4.125e11,
            std_throughput: 2.5e10,
        }];
        let mut buf = Vec::new();
        write_metrics_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "msnr,pt_access,0.8,50,112.5,6.25,4.125e11,2.5e10"
        );
        assert_eq!(parse_metrics_csv(&text).unwrap(), records);
        assert!(parse_metrics_csv("nope\n").is_err());
    }

    proptest! {
        #[test]
        fn sig_digits_within_half_ulp(x in -1e15f64..1e15) {
            let s = format_sig(x, 6);
            let back: f64 = s.parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-6 * x.abs() + 1e-300);
        }
    }
}
