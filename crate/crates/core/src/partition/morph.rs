use super::image::EdgeMask;

/// Binary dilation by a `(2 * radius + 1)` square.
///
/// The square is separable, so rows and columns are swept independently.
pub fn dilate(mask: &EdgeMask, radius: usize) -> EdgeMask {
    if radius == 0 {
        return mask.clone();
    }
    let (w, h) = (mask.width(), mask.height());
    let src = mask.bits();

    let mut rows = vec![false; w * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let lo = x.saturating_sub(radius);
            let hi = (x + radius).min(w - 1);
            rows[y * w + x] = line[lo..=hi].iter().any(|b| *b);
        }
    }

    let mut out = vec![false; w * h];
    for y in 0..h {
        let lo = y.saturating_sub(radius);
        let hi = (y + radius).min(h - 1);
        for x in 0..w {
            out[y * w + x] = (lo..=hi).any(|yy| rows[yy * w + x]);
        }
    }
    EdgeMask::new(w, h, out).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct definition: a pixel is set if any input pixel lies within
    // Chebyshev distance `radius`.
    fn dilate_oracle(mask: &EdgeMask, radius: usize) -> Vec<bool> {
        let (w, h) = (mask.width() as isize, mask.height() as isize);
        let r = radius as isize;
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let mut hit = false;
                for dy in -r..=r {
                    for dx in -r..=r {
                        let (xx, yy) = (x + dx, y + dy);
                        if xx >= 0
                            && yy >= 0
                            && xx < w
                            && yy < h
                            && mask.get(xx as usize, yy as usize)
                        {
                            hit = true;
                        }
                    }
                }
                out.push(hit);
            }
        }
        out
    }

    #[test]
    fn radius_zero_is_identity() {
        let m = EdgeMask::new(3, 2, vec![true, false, false, false, true, false]).unwrap();
        assert_eq!(dilate(&m, 0), m);
    }

    #[test]
    fn empty_stays_empty() {
        let m = EdgeMask::empty(7, 4);
        assert_eq!(dilate(&m, 3).count(), 0);
    }

    #[test]
    fn single_point_grows_to_square() {
        let mut bits = vec![false; 25];
        bits[12] = true;
        let m = dilate(&EdgeMask::new(5, 5, bits).unwrap(), 1);
        for y in 0..5 {
            for x in 0..5 {
                let inside = (1..=3).contains(&x) && (1..=3).contains(&y);
                assert_eq!(m.get(x, y), inside, "({x}, {y})");
            }
        }
    }

    fn mask_strategy() -> impl Strategy<Value = EdgeMask> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            prop::collection::vec(prop::bool::weighted(0.1), w * h)
                .prop_map(move |bits| EdgeMask::new(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_definition(m in mask_strategy(), r in 0usize..4) {
            let got = dilate(&m, r);
            prop_assert_eq!(got.bits(), &dilate_oracle(&m, r)[..]);
        }

        #[test]
        fn monotone_in_radius(m in mask_strategy(), r in 0usize..4) {
            let a = dilate(&m, r);
            let b = dilate(&m, r + 1);
            prop_assert!(m.is_subset_of(&a));
            prop_assert!(a.is_subset_of(&b));
        }
    }
}
