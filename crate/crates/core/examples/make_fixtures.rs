//! Regenerates the synthetic test images under `fixtures/images`.
//!
//! Usage: `cargo run -p jointaug-core --example make_fixtures -- <dir>`

use std::f64::consts::PI;

use jointaug_core::imageops::ImageBuffer;
use jointaug_core::io::write_image;

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn rgb(w: u32, h: u32, f: impl Fn(f64, f64) -> [f64; 3]) -> ImageBuffer {
    let mut data = Vec::with_capacity((w * h * 3) as usize);
    for y in 0..h {
        for x in 0..w {
            let px = f(f64::from(x) / f64::from(w), f64::from(y) / f64::from(h));
            data.extend(px.iter().map(|&c| to_u8(c)));
        }
    }
    ImageBuffer::new(w, h, 3, data).expect("consistent size")
}

/// Sky, sun, rolling hills and a darker foreground.
fn landscape() -> ImageBuffer {
    rgb(160, 120, |x, y| {
        let ridge = 0.55 + 0.08 * (x * 2.0 * PI * 1.5).sin() + 0.03 * (x * 2.0 * PI * 5.0).cos();
        let sun = ((x - 0.75).powi(2) + (y - 0.2).powi(2)).sqrt();
        if y < ridge {
            if sun < 0.08 {
                [255.0, 230.0, 120.0]
            } else {
                [90.0 + 100.0 * y, 150.0 + 80.0 * y, 235.0]
            }
        } else {
            let depth = (y - ridge) / (1.0 - ridge);
            let grass = 20.0 * (x * 90.0).sin() * (y * 70.0).cos();
            [
                40.0 + 30.0 * depth + grass,
                140.0 - 70.0 * depth + grass,
                50.0 - 20.0 * depth,
            ]
        }
    })
}

/// Coloured discs and a bar on a textured background.
fn objects() -> ImageBuffer {
    let discs = [
        (0.25, 0.3, 0.15, [220.0, 40.0, 40.0]),
        (0.7, 0.65, 0.2, [40.0, 70.0, 210.0]),
        (0.3, 0.78, 0.1, [240.0, 200.0, 30.0]),
    ];
    rgb(128, 128, move |x, y| {
        for (cx, cy, r, c) in discs {
            if (x - cx).powi(2) + (y - cy).powi(2) < r * r {
                return c;
            }
        }
        if (0.55..0.9).contains(&x) && (0.12..0.3).contains(&y) {
            return [30.0, 160.0, 90.0];
        }
        let t = 128.0 + 40.0 * ((x * 37.0).sin() * (y * 29.0).sin());
        [t, t * 0.95, t * 0.85]
    })
}

/// Oblique stripes fading under a vignette.
fn stripes() -> ImageBuffer {
    rgb(144, 112, |x, y| {
        let s = (2.0 * PI * (6.0 * x + 3.0 * y)).sin();
        let v = 1.0 - 1.2 * ((x - 0.5).powi(2) + (y - 0.5).powi(2));
        [
            (140.0 + 100.0 * s) * v,
            (90.0 + 60.0 * s * x) * v,
            (200.0 - 120.0 * y) * v,
        ]
    })
}

/// Gray rings off-centre with a diagonal ramp.
fn rings() -> ImageBuffer {
    let (w, h) = (96u32, 128u32);
    let mut data = Vec::with_capacity((w * h) as usize);
    for py in 0..h {
        for px in 0..w {
            let (x, y) = (f64::from(px) / f64::from(w), f64::from(py) / f64::from(h));
            let r = ((x - 0.35).powi(2) + (y - 0.4).powi(2)).sqrt();
            data.push(to_u8(
                110.0 + 70.0 * (r * 40.0).cos() * (-2.5 * r).exp() + 60.0 * (x + y - 1.0),
            ));
        }
    }
    ImageBuffer::new(w, h, 1, data).expect("consistent size")
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures/images".into());
    std::fs::create_dir_all(&dir).expect("create output dir");
    let images = [
        ("landscape.ppm", landscape()),
        ("objects.ppm", objects()),
        ("stripes.ppm", stripes()),
        ("rings.pgm", rings()),
    ];
    for (name, img) in images {
        let path = std::path::Path::new(&dir).join(name);
        write_image(&img, &path).expect("write fixture");
        println!("{}", path.display());
    }
}
