//! Shared inputs for the criterion benches.

use jointaug_core::imageops::ImageBuffer;

/// A deterministic RGB test card: diagonal gradients plus a checker.
pub fn test_card(width: u32, height: u32) -> ImageBuffer {
    let mut data = Vec::with_capacity((width * height * 3) as usize);
    for y in 0..height {
        for x in 0..width {
            let checker = if ((x / 16) + (y / 16)) % 2 == 0 {
                40
            } else {
                0
            };
            data.push(((x * 255) / width.max(1)) as u8 / 2 + checker);
            data.push(((y * 255) / height.max(1)) as u8 / 2 + checker);
            data.push((((x + y) * 127) / (width + height).max(1)) as u8 + checker);
        }
    }
    ImageBuffer::new(width, height, 3, data).expect("consistent test card")
}
