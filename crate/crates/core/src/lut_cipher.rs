//! Dynamic chaotic look-up-table cipher with XOR masking and ciphertext
//! feedback.
//!
//! Per symbol: `c = LUT[p ^ k ^ feedback]`, where `k` comes from the XOR
//! stream and `feedback` is the previous ciphertext symbol (0 at start). The
//! table is a chaotic permutation rebuilt from the LUT stream every
//! [`REBUILD_PERIOD`] symbols.

use crate::chaos::{ChaosStream, SubKey, DEFAULT_BURN_IN};
use crate::error::{Error, Result};

/// Symbols processed between two table rebuilds.
pub const REBUILD_PERIOD: usize = 256;

/// Cipher alphabet: a power of two between 2 and 256.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet(u16);

impl Alphabet {
    /// Mask plane.
    pub const BINARY: Alphabet = Alphabet(2);
    /// Seven most significant bit planes.
    pub const SEVEN_BIT: Alphabet = Alphabet(128);
    /// Whole bytes.
    pub const BYTE: Alphabet = Alphabet(256);

    pub fn new(size: usize) -> Result<Self> {
        if (2..=256).contains(&size) && size.is_power_of_two() {
            Ok(Self(size as u16))
        } else {
            Err(Error::Alphabet(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn check(self, symbol: u8) -> Result<u8> {
        if (symbol as usize) < self.size() {
            Ok(symbol)
        } else {
            Err(Error::Symbol {
                symbol: symbol as u16,
                alphabet: self.size(),
            })
        }
    }
}

/// A substitution table and its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lut {
    table: Vec<u8>,
    inverse: Vec<u8>,
}

impl Lut {
    pub fn identity(size: usize) -> Self {
        let table: Vec<u8> = (0..size).map(|v| v as u8).collect();
        Self {
            inverse: table.clone(),
            table,
        }
    }

    /// Ranks the draws: `table[i]` is the position of draw `i` in ascending
    /// order, ties broken by draw index.
    pub fn from_draws(draws: &[f64]) -> Self {
        assert!(draws.len() <= 256, "alphabet larger than a byte");
        let mut order: Vec<usize> = (0..draws.len()).collect();
        order.sort_by(|&a, &b| draws[a].total_cmp(&draws[b]));
        let mut table = vec![0u8; draws.len()];
        for (rank, &i) in order.iter().enumerate() {
            table[i] = rank as u8;
        }
        // inverse[rank] = draw index
        let inverse = order.iter().map(|&i| i as u8).collect();
        Self { table, inverse }
    }

    /// Draws `size` values from `stream` and ranks them.
    pub fn build(stream: &mut ChaosStream, size: usize) -> Self {
        let draws: Vec<f64> = (0..size).map(|_| stream.next_value()).collect();
        Self::from_draws(&draws)
    }

    pub fn from_table(table: Vec<u8>) -> Option<Self> {
        let mut inverse = vec![0u8; table.len()];
        let mut seen = vec![false; table.len()];
        for (i, &v) in table.iter().enumerate() {
            let slot = seen.get_mut(v as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
            inverse[v as usize] = i as u8;
        }
        Some(Self { table, inverse })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn inverse(&self) -> &[u8] {
        &self.inverse
    }

    /// True when `table` is a permutation and `inverse` undoes it.
    pub fn is_bijection(&self) -> bool {
        let n = self.table.len();
        let mut seen = vec![false; n];
        for &v in &self.table {
            match seen.get_mut(v as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        self.inverse.len() == n
            && (0..n).all(|v| self.inverse[self.table[v] as usize] as usize == v)
    }
}

/// Running state of one sub-cryptosystem.
///
/// Encryption and decryption states stay in lockstep as long as they see the
/// same ciphertext symbols in the same order.
#[derive(Debug, Clone)]
pub struct CipherState {
    lut: Lut,
    lut_stream: ChaosStream,
    xor_stream: ChaosStream,
    feedback: u8,
    alphabet: Alphabet,
    since_rebuild: usize,
    rebuilds: u64,
}

impl CipherState {
    pub fn new(sk: &SubKey, alphabet: Alphabet) -> Self {
        Self::with_burn_in(sk, alphabet, DEFAULT_BURN_IN)
    }

    pub fn with_burn_in(sk: &SubKey, alphabet: Alphabet, burn_in: usize) -> Self {
        let mut lut_stream = sk.lut_stream(burn_in);
        let lut = Lut::build(&mut lut_stream, alphabet.size());
        Self::from_parts(lut, lut_stream, sk.xor_stream(burn_in), alphabet)
    }

    /// Assembles a state from an explicit initial table and streams.
    pub fn from_parts(
        lut: Lut,
        lut_stream: ChaosStream,
        xor_stream: ChaosStream,
        alphabet: Alphabet,
    ) -> Self {
        assert_eq!(lut.len(), alphabet.size(), "table does not match alphabet");
        Self {
            lut,
            lut_stream,
            xor_stream,
            feedback: 0,
            alphabet,
            since_rebuild: 0,
            rebuilds: 0,
        }
    }

    /// Refreshes the table when due and draws the next mask symbol.
    #[inline]
    fn next_mask(&mut self) -> u8 {
        if self.since_rebuild == REBUILD_PERIOD {
            self.lut = Lut::build(&mut self.lut_stream, self.alphabet.size());
            self.since_rebuild = 0;
            self.rebuilds += 1;
        }
        self.since_rebuild += 1;
        self.xor_stream.next_symbol(self.alphabet.size()) as u8
    }

    pub fn encrypt_symbol(&mut self, p: u8) -> Result<u8> {
        let p = self.alphabet.check(p)?;
        let k = self.next_mask();
        let c = self.lut.table[(p ^ k ^ self.feedback) as usize];
        self.feedback = c;
        Ok(c)
    }

    pub fn decrypt_symbol(&mut self, c: u8) -> Result<u8> {
        let c = self.alphabet.check(c)?;
        let k = self.next_mask();
        let p = self.lut.inverse[c as usize] ^ k ^ self.feedback;
        self.feedback = c;
        Ok(p)
    }

    /// Consumes keystream for `n` symbols without processing data.
    pub fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.next_mask();
        }
    }

    pub fn feedback(&self) -> u8 {
        self.feedback
    }

    /// Overrides the value mixed into the next symbol.
    pub fn set_feedback(&mut self, feedback: u8) -> Result<()> {
        self.feedback = self.alphabet.check(feedback)?;
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn lut(&self) -> &Lut {
        &self.lut
    }

    /// Number of table refreshes since construction.
    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }
}

pub fn encrypt_sequence(sk: &SubKey, data: &[u8], alphabet: Alphabet) -> Result<Vec<u8>> {
    let mut st = CipherState::new(sk, alphabet);
    data.iter().map(|&p| st.encrypt_symbol(p)).collect()
}

pub fn decrypt_sequence(sk: &SubKey, data: &[u8], alphabet: Alphabet) -> Result<Vec<u8>> {
    let mut st = CipherState::new(sk, alphabet);
    data.iter().map(|&c| st.decrypt_symbol(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{Key, SubKeyField};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Stream that emits 0.0 forever (0.5 -> 1.0 -> 0.0 under mu = 4).
    fn zero_stream() -> ChaosStream {
        ChaosStream::new(0.5, 4.0, 1).unwrap()
    }

    #[test]
    fn ranking_examples() {
        assert_eq!(
            Lut::from_draws(&[0.1, 0.2, 0.3, 0.4]).table(),
            &[0, 1, 2, 3]
        );
        assert_eq!(
            Lut::from_draws(&[0.4, 0.3, 0.2, 0.1]).table(),
            &[3, 2, 1, 0]
        );
        assert_eq!(Lut::from_draws(&[0.9, 0.1, 0.5]).table(), &[2, 0, 1]);
        // Stable ties.
        assert_eq!(Lut::from_draws(&[0.5, 0.5, 0.1]).table(), &[1, 2, 0]);
        assert!(Lut::from_draws(&[0.9, 0.1, 0.5]).is_bijection());
    }

    #[test]
    fn from_table_rejects_duplicates() {
        assert!(Lut::from_table(vec![0, 0]).is_none());
        assert!(Lut::from_table(vec![0, 2]).is_none());
        assert_eq!(Lut::from_table(vec![1, 0]).unwrap().inverse(), &[1, 0]);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(3).is_err());
        assert!(Alphabet::new(512).is_err());
        assert!(Alphabet::new(1).is_err());
        assert_eq!(Alphabet::new(4).unwrap().size(), 4);
    }

    #[test]
    fn identity_path() {
        let mut st = CipherState::from_parts(
            Lut::identity(2),
            zero_stream(),
            zero_stream(),
            Alphabet::BINARY,
        );
        assert_eq!(st.encrypt_symbol(1).unwrap(), 1);

        let mut dec = CipherState::from_parts(
            Lut::identity(2),
            zero_stream(),
            zero_stream(),
            Alphabet::BINARY,
        );
        assert_eq!(dec.decrypt_symbol(1).unwrap(), 1);
    }

    #[test]
    fn pure_substitution() {
        let lut = Lut::from_table(vec![3, 2, 1, 0]).unwrap();
        let a4 = Alphabet::new(4).unwrap();
        let mut st = CipherState::from_parts(lut.clone(), zero_stream(), zero_stream(), a4);
        assert_eq!(st.encrypt_symbol(0).unwrap(), 3);
        let mut dec = CipherState::from_parts(lut, zero_stream(), zero_stream(), a4);
        assert_eq!(dec.decrypt_symbol(3).unwrap(), 0);
    }

    #[test]
    fn out_of_range_symbols() {
        let sk = *Key::test_key().sk1();
        let mut st = CipherState::new(&sk, Alphabet::SEVEN_BIT);
        assert!(matches!(
            st.encrypt_symbol(128),
            Err(Error::Symbol {
                symbol: 128,
                alphabet: 128
            })
        ));
        assert!(st.decrypt_symbol(200).is_err());
        assert!(st.set_feedback(128).is_err());
        assert!(encrypt_sequence(&sk, &[0, 1, 2], Alphabet::BINARY).is_err());
    }

    #[test]
    fn empty_sequence() {
        let sk = *Key::test_key().sk2();
        assert!(encrypt_sequence(&sk, &[], Alphabet::BYTE)
            .unwrap()
            .is_empty());
        assert!(decrypt_sequence(&sk, &[], Alphabet::BYTE)
            .unwrap()
            .is_empty());
    }

    fn random_state(rng: &mut ChaCha8Rng) -> CipherState {
        let sk = SubKey::random(rng);
        let mut st = CipherState::new(&sk, Alphabet::BYTE);
        // Land somewhere inside a rebuild period with a random feedback.
        st.advance(rng.random_range(0..2000));
        st.set_feedback(rng.random()).unwrap();
        st
    }

    #[test]
    fn exhaustive_symbol_round_trip_and_injectivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let st = random_state(&mut rng);
            let mut images = [false; 256];
            for p in 0..=255u8 {
                let mut enc = st.clone();
                let mut dec = st.clone();
                let c = enc.encrypt_symbol(p).unwrap();
                assert!(!images[c as usize], "encrypt_symbol not injective");
                images[c as usize] = true;
                assert_eq!(dec.decrypt_symbol(c).unwrap(), p);
                assert_eq!(enc.feedback(), dec.feedback());
            }
        }
    }

    #[test]
    fn table_stays_a_permutation_across_rebuilds() {
        let sk = *Key::test_key().sk1();
        for alphabet in [Alphabet::BINARY, Alphabet::SEVEN_BIT, Alphabet::BYTE] {
            let mut st = CipherState::new(&sk, alphabet);
            assert!(st.lut().is_bijection());
            let mut last = 0;
            while st.rebuilds() < 500 {
                st.encrypt_symbol(0).unwrap();
                if st.rebuilds() != last {
                    last = st.rebuilds();
                    assert!(st.lut().is_bijection());
                }
            }
        }
    }

    #[test]
    fn advance_matches_processing() {
        let sk = *Key::test_key().sk3();
        let mut a = CipherState::new(&sk, Alphabet::SEVEN_BIT);
        let mut b = a.clone();
        for i in 0..1000u32 {
            a.encrypt_symbol((i % 128) as u8).unwrap();
        }
        b.advance(1000);
        a.set_feedback(5).unwrap();
        b.set_feedback(5).unwrap();
        assert_eq!(a.encrypt_symbol(9).unwrap(), b.encrypt_symbol(9).unwrap());
        assert_eq!(a.rebuilds(), b.rebuilds());
    }

    #[test]
    fn flipping_first_symbol_changes_every_later_symbol() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut changed = 0usize;
        let mut total = 0usize;
        for _ in 0..100 {
            let sk = SubKey::random(&mut rng);
            let data: Vec<u8> = (0..2048).map(|_| rng.random()).collect();
            let mut other = data.clone();
            other[0] ^= 1 << rng.random_range(0..8);
            let a = encrypt_sequence(&sk, &data, Alphabet::BYTE).unwrap();
            let b = encrypt_sequence(&sk, &other, Alphabet::BYTE).unwrap();
            changed += a.iter().zip(&b).skip(1).filter(|(x, y)| x != y).count();
            total += a.len() - 1;
        }
        let rate = changed as f64 / total as f64;
        assert!(rate >= 0.99, "{rate}");
        assert!(rate >= 1.0 - 2.0 / 256.0);
    }

    #[test]
    fn tiny_key_change_changes_ciphertext() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let key = Key::test_key();
        for sk in [key.sk1(), key.sk2(), key.sk3()] {
            let moved = sk.perturbed(SubKeyField::X0, 1e-10).unwrap();
            let data: Vec<u8> = (0..65536).map(|_| rng.random()).collect();
            let a = encrypt_sequence(sk, &data, Alphabet::BYTE).unwrap();
            let b = encrypt_sequence(&moved, &data, Alphabet::BYTE).unwrap();
            let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            let rate = diff as f64 / data.len() as f64;
            assert!(rate >= 0.99, "{rate}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn sequence_round_trip(
            seed in any::<u64>(),
            bits in 1u32..=8,
            data in prop::collection::vec(any::<u8>(), 0..700),
        ) {
            let sk = SubKey::random(&mut ChaCha8Rng::seed_from_u64(seed));
            let alphabet = Alphabet::new(1 << bits).unwrap();
            let data: Vec<u8> = data.iter().map(|v| (*v as usize % alphabet.size()) as u8).collect();
            let c = encrypt_sequence(&sk, &data, alphabet).unwrap();
            prop_assert_eq!(c.len(), data.len());
            prop_assert_eq!(decrypt_sequence(&sk, &c, alphabet).unwrap(), data);
        }
    }
}
