//! Scalar traits shared by the numeric parts of the crate.
//!
//! Group coordinates are exact integers ([`ExactInt`]): either a machine
//! integer that panics on overflow, or an arbitrary-precision [`BigInt`].
//! Fitting and classification work over any [`FitFloat`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};
use smallvec::SmallVec;

/// Exact integer used for group coordinates.
///
/// Arithmetic goes through the checked operations; a fixed-width type that
/// would overflow panics instead of wrapping. The byte encoding is the
/// minimal little-endian two's complement form prefixed by its length, and
/// every implementation produces the same bytes for the same value.
pub trait ExactInt:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    fn encode_into(&self, out: &mut SmallVec<[u8; 16]>);

    /// Decodes one value from the front of `bytes`, returning it together
    /// with the number of bytes consumed.
    fn decode_from(bytes: &[u8]) -> (Self, usize);

    fn add_exact(&self, other: &Self) -> Self {
        self.checked_add(other)
            .unwrap_or_else(|| panic!("integer overflow in {self} + {other}; use a big-integer scalar"))
    }

    fn sub_exact(&self, other: &Self) -> Self {
        self.checked_sub(other)
            .unwrap_or_else(|| panic!("integer overflow in {self} - {other}; use a big-integer scalar"))
    }

    fn mul_exact(&self, other: &Self) -> Self {
        self.checked_mul(other)
            .unwrap_or_else(|| panic!("integer overflow in {self} * {other}; use a big-integer scalar"))
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every exact scalar")
    }
}

fn minimal_le(bytes: &[u8]) -> &[u8] {
    let mut len = bytes.len();
    while len > 1 {
        let top = bytes[len - 1];
        let below_sign = bytes[len - 2] & 0x80;
        if (top == 0x00 && below_sign == 0) || (top == 0xff && below_sign != 0) {
            len -= 1;
        } else {
            break;
        }
    }
    &bytes[..len]
}

fn push_len_prefixed(out: &mut SmallVec<[u8; 16]>, payload: &[u8]) {
    let len = u8::try_from(payload.len()).expect("integer encoding longer than 255 bytes");
    out.push(len);
    out.extend_from_slice(payload);
}

macro_rules! exact_machine_int {
    ($($t:ty),*) => {$(
        impl ExactInt for $t {
            fn encode_into(&self, out: &mut SmallVec<[u8; 16]>) {
                push_len_prefixed(out, minimal_le(&self.to_le_bytes()));
            }

            fn decode_from(bytes: &[u8]) -> (Self, usize) {
                let len = bytes[0] as usize;
                let payload = &bytes[1..1 + len];
                let fill = if payload[len - 1] & 0x80 != 0 { 0xff } else { 0x00 };
                let mut buf = [fill; std::mem::size_of::<$t>()];
                assert!(len <= buf.len(), "encoded integer does not fit {}", stringify!($t));
                buf[..len].copy_from_slice(payload);
                (<$t>::from_le_bytes(buf), 1 + len)
            }
        }
    )*};
}

exact_machine_int!(i64, i128);

impl ExactInt for BigInt {
    fn encode_into(&self, out: &mut SmallVec<[u8; 16]>) {
        push_len_prefixed(out, &self.to_signed_bytes_le());
    }

    fn decode_from(bytes: &[u8]) -> (Self, usize) {
        let len = bytes[0] as usize;
        (BigInt::from_signed_bytes_le(&bytes[1..1 + len]), 1 + len)
    }
}

/// Floating-point type used by the curve fits.
pub trait FitFloat:
    num_traits::Float + FromPrimitive + Debug + Display + serde::Serialize + Send + Sync + 'static
{
}

impl FitFloat for f32 {}
impl FitFloat for f64 {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enc<T: ExactInt>(v: &T) -> Vec<u8> {
        let mut out = SmallVec::new();
        v.encode_into(&mut out);
        out.to_vec()
    }

    #[test]
    fn zero_and_small_values() {
        assert_eq!(enc(&0i64), vec![1, 0]);
        assert_eq!(enc(&-1i64), vec![1, 0xff]);
        assert_eq!(enc(&128i64), vec![2, 0x80, 0x00]);
        assert_eq!(enc(&BigInt::from(0)), vec![1, 0]);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn machine_overflow_is_loud() {
        let _ = i64::MAX.add_exact(&1);
    }

    proptest! {
        #[test]
        fn encodings_agree_and_roundtrip(v in any::<i64>()) {
            let big = BigInt::from(v);
            prop_assert_eq!(enc(&v), enc(&big));
            prop_assert_eq!(enc(&(v as i128)), enc(&big));
            let bytes = enc(&v);
            prop_assert_eq!(i64::decode_from(&bytes), (v, bytes.len()));
            prop_assert_eq!(BigInt::decode_from(&bytes), (big, bytes.len()));
        }
    }
}
