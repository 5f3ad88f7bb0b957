//! Deterministic CSV and JSON output. Every float is printed as `%.12e`
//! (C style: mantissa with 12 decimals, signed exponent of at least two
//! digits), so reruns are byte-identical.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::dynamics::Trajectory;
use crate::perturbation::SplittingFit;
use crate::phase::PhaseDiagramGrid;
use crate::scalar::Real;
use crate::spectra::SweepCurve;

/// `%.12e` formatting; non-finite values print as `nan`, `inf`, `-inf`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Pretty JSON formatter that prints floats with [`sci`] and non-finite
/// floats as `null`.
pub struct SciFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for SciFormatter<'_> {
    fn default() -> Self {
        SciFormatter {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(sci(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json_string<S: Serialize + ?Sized>(value: &S) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn f<T: Real>(x: T) -> String {
    sci(x.to_f64_lossy())
}

pub fn write_grid_csv<T: Real, W: Write>(grid: &PhaseDiagramGrid<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "x,y,class,delta,a,b,feasible")?;
    for c in &grid.cells {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            f(c.x),
            f(c.y),
            c.class.label(),
            f(c.delta),
            f(c.a),
            f(c.b),
            c.feasible
        )?;
    }
    Ok(())
}

/// One row per sample with the branch-tracked eigenvalues.
pub fn write_sweep_csv<T: Real, W: Write>(curve: &SweepCurve<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "param,re0,im0,re1,im1,re2,im2,class")?;
    for (p, t) in curve.points.iter().zip(&curve.tracks) {
        let class = match &p.spectrum {
            None => "infeasible",
            Some(s) => s.class.map_or("non_real", |c| c.label()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            f(p.param),
            f(t[0].re),
            f(t[0].im),
            f(t[1].re),
            f(t[1].im),
            f(t[2].re),
            f(t[2].im),
            class
        )?;
    }
    Ok(())
}

pub fn write_trajectory_csv<T: Real, W: Write>(
    traj: &Trajectory<T>,
    stride: usize,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "t,re_a1,im_a1,re_a2,im_a2,re_b,im_b")?;
    let stride = stride.max(1);
    let last = traj.times.len().saturating_sub(1);
    for (i, (t, v)) in traj.times.iter().zip(&traj.states).enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            f(*t),
            f(v[0].re),
            f(v[0].im),
            f(v[1].re),
            f(v[1].im),
            f(v[2].re),
            f(v[2].im)
        )?;
    }
    Ok(())
}

/// Raw gaps of all three branch pairs on a shared ε grid.
pub fn write_gaps_csv<T: Real, W: Write>(fits: &[SplittingFit<T>; 3], mut w: W) -> io::Result<()> {
    writeln!(w, "epsilon,gap01,gap02,gap12")?;
    for (k, e) in fits[0].epsilon_grid.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            f(*e),
            f(fits[0].gaps[k]),
            f(fits[1].gaps[k]),
            f(fits[2].gaps[k])
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent() {
        assert_eq!(sci(1.5), "1.500000000000e+00");
        assert_eq!(sci(-0.00123), "-1.230000000000e-03");
        assert_eq!(sci(0.0), "0.000000000000e+00");
        assert_eq!(sci(6.02e123), "6.020000000000e+123");
        assert_eq!(sci(f64::NAN), "nan");
    }

    #[test]
    fn json_floats_are_fixed() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: Vec<f64>,
            c: f64,
        }
        let s = to_json_string(&S {
            a: 0.1,
            b: vec![2.0],
            c: f64::NAN,
        })
        .unwrap();
        assert_eq!(s, "{\n  \"a\": 1.000000000000e-01,\n  \"b\": [\n    2.000000000000e+00\n  ],\n  \"c\": null\n}\n");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a"], 0.1);
    }
}
