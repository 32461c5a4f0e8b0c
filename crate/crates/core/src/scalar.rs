use std::fmt::Debug;

/// Coordinate ring for point sets. Orientation signs are exact for integer
/// instantiations (`i64`, `i128`, `BigInt`) and for exact rationals.
pub trait Coordinate: Clone + Debug + num_traits::Num + num_traits::Signed + Send + Sync {}

impl<T: Clone + Debug + num_traits::Num + num_traits::Signed + Send + Sync> Coordinate for T {}
