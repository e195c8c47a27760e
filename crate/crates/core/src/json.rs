//! JSON wire formats. Lattices serialize as their canonical basis rows of
//! scalar strings; orders as the flattened carrier basis rendered as d x d
//! grids; class sets as arrays of lattices. Deserialization canonicalizes and
//! validates.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::building::{class_of, Apartment, ClassSet, LatticeClass};
use crate::lattice::Lattice;
use crate::matrix::{vec_col_major, RationalMatrix};
use crate::order::Order;
use crate::polytrope::ExponentMatrix;
use crate::valuation::{parse_scalar, scalar_to_string, PAdicContext};

#[derive(Serialize, Deserialize)]
struct LatticeRaw {
    p: u64,
    d: usize,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct OrderRaw {
    p: u64,
    d: usize,
    basis: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct ExponentMatrixRaw {
    d: usize,
    entries: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct ApartmentRaw {
    p: u64,
    d: usize,
    frame: Vec<Vec<String>>,
}

pub fn matrix_to_string_rows(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| scalar_to_string(m.at(i, j)))
                .collect()
        })
        .collect()
}

fn matrix_from_string_rows<E: DeError>(rows: &[Vec<String>]) -> Result<RationalMatrix, E> {
    let parsed: Result<Vec<Vec<_>>, E> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_scalar(s).map_err(E::custom))
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(parsed?).map_err(E::custom)
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LatticeRaw {
            p: self.ctx().prime(),
            d: self.dim(),
            basis: matrix_to_string_rows(self.basis()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = LatticeRaw::deserialize(deserializer)?;
        let ctx = PAdicContext::new(raw.p).map_err(D::Error::custom)?;
        if raw.basis.len() != raw.d {
            return Err(D::Error::custom("basis has wrong number of rows"));
        }
        let m = matrix_from_string_rows(&raw.basis)?;
        Lattice::canonicalize(ctx, &m).map_err(D::Error::custom)
    }
}

impl Serialize for LatticeClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rep().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(class_of(&Lattice::deserialize(deserializer)?))
    }
}

impl Serialize for ClassSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ClassSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<LatticeClass>::deserialize(deserializer)?;
        Ok(ClassSet::new(items))
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        OrderRaw {
            p: self.ctx().prime(),
            d: self.matrix_dim(),
            basis: self
                .basis_matrices()
                .iter()
                .map(matrix_to_string_rows)
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = OrderRaw::deserialize(deserializer)?;
        let ctx = PAdicContext::new(raw.p).map_err(D::Error::custom)?;
        let d = raw.d;
        let gens: Result<Vec<_>, D::Error> = raw
            .basis
            .iter()
            .map(|grid| {
                let m = matrix_from_string_rows(grid)?;
                if !m.is_square() || m.rows() != d {
                    return Err(D::Error::custom("order basis grid of wrong size"));
                }
                Ok(vec_col_major(&m))
            })
            .collect();
        let carrier = Lattice::from_generators(ctx, d * d, gens?).map_err(D::Error::custom)?;
        Order::try_new(d, carrier).map_err(D::Error::custom)
    }
}

impl Serialize for ExponentMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExponentMatrixRaw {
            d: self.d(),
            entries: self.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExponentMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ExponentMatrixRaw::deserialize(deserializer)?;
        if raw.entries.len() != raw.d {
            return Err(D::Error::custom("exponent matrix has wrong row count"));
        }
        ExponentMatrix::from_rows(&raw.entries).map_err(D::Error::custom)
    }
}

impl Serialize for Apartment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ApartmentRaw {
            p: self.ctx().prime(),
            d: self.dim(),
            frame: matrix_to_string_rows(self.frame()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Apartment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ApartmentRaw::deserialize(deserializer)?;
        let ctx = PAdicContext::new(raw.p).map_err(D::Error::custom)?;
        if raw.frame.len() != raw.d {
            return Err(D::Error::custom("frame has wrong row count"));
        }
        let m = matrix_from_string_rows(&raw.frame)?;
        Apartment::new(ctx, m).map_err(D::Error::custom)
    }
}

/// A radical idealizer chain with the invariant classes of each term.
#[derive(Serialize, Deserialize)]
pub struct ChainJson {
    pub orders: Vec<Order>,
    pub class_sets: Vec<ClassSet>,
}
