//! A static picture of the construction: the strip decomposition of the
//! upper band, the pins of the collapse chart and the two slits.

use std::fmt::Write as _;

use rug::float::Constant;
use serde::Serialize;

use crate::collapse_map::{ChartU, Center, Collapse};
use crate::error::Result;
use crate::numerics::{parse_rational, BigFloat, PlanePoint, Precision};
use crate::strips::{strip_table, StripRow, Zone};

/// A pinned angle of the source chart, the boundary point it names and
/// where the collapse sends it.
#[derive(Clone, Debug, Serialize)]
pub struct ChartPin {
    pub label: &'static str,
    /// Source fan angle around `v6`.
    pub alpha: f64,
    /// Target angle around `v0` and relative radius of the pinned image.
    pub theta: f64,
    pub rho: f64,
    pub source: [f64; 2],
    pub image: [f64; 2],
}

/// A corner of the right half-square seen from one of the chart centres.
#[derive(Clone, Debug, Serialize)]
pub struct ChartCorner {
    pub center: &'static str,
    pub corner: &'static str,
    pub angle: f64,
    pub point: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Slit {
    pub from: [f64; 2],
    pub to: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryScene {
    pub max_level: u64,
    pub strips: Vec<StripRow>,
    pub pins: Vec<ChartPin>,
    pub corners: Vec<ChartCorner>,
    pub slits: Vec<Slit>,
}

/// Builds the scene for levels `1 ..= max_level`.
pub fn scene(max_level: u64, prec: Precision) -> Result<GeometryScene> {
    let c = Collapse::new(prec);
    let bits = prec.bits();
    let pi = BigFloat::with_val(bits, Constant::Pi);
    let frac = |n: u32, d: u32| BigFloat::with_val(bits, &pi * n) / d;

    let pin_angles = [
        ("right edge, lower end", frac(0, 1)),
        ("bottom split point", frac(1, 8)),
        ("v8", frac(1, 4)),
        ("fiber centre", frac(1, 2)),
        ("v7", frac(3, 4)),
        ("top split point", frac(7, 8)),
        ("right edge, upper end", frac(1, 1)),
    ];
    let mut pins = Vec::new();
    for (label, alpha) in pin_angles {
        let u = ChartU {
            alpha: alpha.clone(),
            rho: BigFloat::with_val(bits, 1),
        };
        let v = c.boundary_reparam(&u)?;
        let source = c.exit_point(Center::V6, &alpha)?;
        pins.push(ChartPin {
            label,
            alpha: alpha.to_f64(),
            theta: v.theta.to_f64(),
            rho: v.rho.to_f64(),
            source: source.to_f64(),
            image: c.xi(&source)?.to_f64(),
        });
    }

    let at = |x: f64, y: f64| PlanePoint::from_f64(prec, x, y);
    let v0 = at(0.5, 0.0);
    let mut corners = vec![
        ChartCorner {
            center: "v6",
            corner: "v8",
            angle: frac(1, 4).to_f64(),
            point: [0.0, -1.0],
        },
        ChartCorner {
            center: "v6",
            corner: "v7",
            angle: frac(3, 4).to_f64(),
            point: [0.0, 1.0],
        },
    ];
    for (corner, p) in [("v2", at(1.0, 1.0)), ("v7", at(0.0, 1.0)), ("v8", at(0.0, -1.0)), ("v4", at(1.0, -1.0))] {
        corners.push(ChartCorner {
            center: "v0",
            corner,
            angle: crate::numerics::angle_normalize(&p, &v0)?.to_f64(),
            point: p.to_f64(),
        });
    }

    Ok(GeometryScene {
        max_level,
        strips: strip_table(max_level)?,
        pins,
        corners,
        slits: vec![
            Slit {
                from: [-1.0, 0.0],
                to: [-0.5, 0.0],
            },
            Slit {
                from: [0.5, 0.0],
                to: [1.0, 0.0],
            },
        ],
    })
}

const SIZE: f64 = 720.0;
const HALF: f64 = 300.0;

fn px(x: f64) -> f64 {
    SIZE / 2.0 + HALF * x
}

fn py(y: f64) -> f64 {
    SIZE / 2.0 - HALF * y
}

fn height(text: &str) -> f64 {
    parse_rational(text).map(|q| q.to_f64()).unwrap_or(f64::NAN)
}

impl GeometryScene {
    /// Plain SVG: the square, the upper band coloured by zone and its mirror
    /// image below, the slits in red, and the pins as markers.
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for row in &self.strips {
            let (lo, hi, fill) = match row.zone {
                Zone::D1Core => (height(&row.lo), height(&row.hi), "#e4e4e4"),
                Zone::FZone => (height(&row.lo), height(&row.mid), "#cfe3f5"),
                Zone::BZone => (height(&row.mid), height(&row.hi), "#f5d9cf"),
                Zone::TopLine => continue,
            };
            for sign in [1.0, -1.0] {
                let (a, b) = (sign * lo, sign * hi);
                let top = py(a.max(b));
                let h = (py(a.min(b)) - top).max(0.0);
                let _ = writeln!(
                    out,
                    r##"<rect x="{:.3}" y="{top:.3}" width="{:.3}" height="{h:.3}" fill="{fill}" stroke="#999" stroke-width="0.3"/>"##,
                    px(-1.0),
                    2.0 * HALF
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            px(-1.0),
            py(1.0),
            2.0 * HALF,
            2.0 * HALF
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#555" stroke-dasharray="4 3"/>"##,
            px(0.0),
            py(1.0),
            px(0.0),
            py(-1.0)
        );
        for slit in &self.slits {
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="red" stroke-width="3"/>"#,
                px(slit.from[0]),
                py(slit.from[1]),
                px(slit.to[0]),
                py(slit.to[1])
            );
        }
        for pin in &self.pins {
            // mirrored copies mark the left half
            for sign in [1.0, -1.0] {
                let (x, y) = (px(sign * pin.source[0]), py(pin.source[1]));
                let _ = writeln!(
                    out,
                    r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#2a6" stroke="black" stroke-width="0.5"><title>{} (alpha = {:.6})</title></circle>"##,
                    pin.label, pin.alpha
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13">levels 1..{}: grey core, blue blend zones, orange shear zones; red slits; green pins</text>"#,
            px(-1.0),
            SIZE - 20.0,
            self.max_level
        );
        out.push_str("</svg>\n");
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Io(e.to_string()))
    }
}
