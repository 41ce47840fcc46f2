use std::time::Instant;

use hiercrypt::analysis::{run_battery, BatteryConfig};
use hiercrypt::io::{read_image, write_image};
use hiercrypt::partition::edge_mask;
use hiercrypt::{
    decrypt_image, decrypt_partial, encrypt_image, synth, AccessRights, CannyParams, Cryptogram,
    GrayImage, Key, PartialKey, SubKeyField, SubKeyId,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn image_strategy() -> impl Strategy<Value = GrayImage> {
    (1usize..48, 1usize..48, any::<u64>(), 0usize..6).prop_map(|(w, h, seed, kind)| match kind {
        0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            GrayImage::from_fn(w, h, |_, _| rand::Rng::random(&mut rng)).unwrap()
        }
        k => synth::by_name(synth::NAMES[k - 1], w, h, seed).unwrap(),
    })
}

fn key_strategy() -> impl Strategy<Value = Key> {
    any::<u64>().prop_map(|s| Key::random(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lossless_above_lsb_with_mask_watermark(img in image_strategy(), key in key_strategy()) {
        let params = CannyParams::default();
        let c = encrypt_image(&img, &key, &params).unwrap();
        prop_assert_eq!((c.image().width(), c.image().height()), (img.width(), img.height()));
        let out = decrypt_image(&c, &key).unwrap();
        prop_assert_eq!(out.upper_planes(), img.upper_planes());
        let mask = edge_mask(&img, &params).unwrap();
        let lsb: Vec<bool> = out.pixels().iter().map(|p| p & 1 == 1).collect();
        prop_assert_eq!(&lsb[..], mask.bits());
    }

    #[test]
    fn wrong_sub_key_only_touches_its_subset(
        img in image_strategy(),
        key in key_strategy(),
        contour in any::<bool>(),
        field in 0usize..4,
    ) {
        let params = CannyParams::default();
        let mask = edge_mask(&img, &params).unwrap();
        let c = encrypt_image(&img, &key, &params).unwrap();
        let id = if contour { SubKeyId::Contour } else { SubKeyId::Region };
        let field = SubKeyField::ALL[field];
        let eps = if key.sub_key(id).get(field) > 0.5 { -1e-10 } else { 1e-10 };
        let wrong = key.perturbed(id, field, eps).unwrap();
        let out = decrypt_image(&c, &wrong).unwrap();
        for (i, (&o, &p)) in out.pixels().iter().zip(img.pixels()).enumerate() {
            if mask.bits()[i] != contour {
                prop_assert_eq!(o >> 1, p >> 1, "pixel {} outside the perturbed subset", i);
            }
            prop_assert_eq!((o & 1) == 1, mask.bits()[i]);
        }
    }
}

#[test]
fn every_rights_combination_with_the_mask_key() {
    let img = synth::thorax(80, 64, 3);
    let key = Key::test_key();
    let mask = edge_mask(&img, &CannyParams::default()).unwrap();
    let c = encrypt_image(&img, &key, &CannyParams::default()).unwrap();
    for rights in ["sk3", "sk1,sk3", "sk2,sk3", "sk1,sk2,sk3"] {
        let rights: AccessRights = rights.parse().unwrap();
        let out = decrypt_partial(&c, &PartialKey::restrict(&key, rights)).unwrap();
        for i in 0..img.len() {
            let held = if mask.bits()[i] {
                rights.sk1
            } else {
                rights.sk2
            };
            let want = if held {
                img.pixels()[i] >> 1
            } else {
                c.image().pixels()[i] >> 1
            };
            assert_eq!(out.pixels()[i] >> 1, want, "{rights} pixel {i}");
        }
    }
    let no_mask: AccessRights = "sk1,sk2".parse().unwrap();
    assert!(decrypt_partial(&c, &PartialKey::restrict(&key, no_mask)).is_err());
}

#[test]
fn cryptogram_survives_both_file_formats() {
    let dir = tempfile::tempdir().unwrap();
    let img = synth::head_phantom(73, 41, 2);
    let key = Key::test_key();
    let c = encrypt_image(&img, &key, &CannyParams::default()).unwrap();
    for name in ["c.pgm", "c.png"] {
        let path = dir.path().join(name);
        write_image(&path, c.image()).unwrap();
        let back = Cryptogram::from_image(read_image(&path).unwrap());
        assert_eq!(back, c);
        assert_eq!(
            decrypt_image(&back, &key).unwrap().upper_planes(),
            img.upper_planes()
        );
    }
}

#[test]
fn full_battery_on_256_image_is_quick() {
    let img = synth::head_phantom(256, 256, 1);
    let start = Instant::now();
    let report = run_battery(&img, &Key::test_key(), &BatteryConfig::default()).unwrap();
    let took = start.elapsed();
    assert!(took.as_secs_f64() < 10.0, "{took:?}");
    let d = report.differential.unwrap();
    assert!(d.npcr >= 99.5 && (30.0..=36.0).contains(&d.uaci), "{d:?}");
    assert_eq!(report.key_sensitivity.unwrap().len(), 6);
}
