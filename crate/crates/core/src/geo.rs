//! Great-circle distances and per-leg distance matrices.

use std::io::Write;

use crate::error::{Error, Result};
use crate::instance::{Echelon, Instance, Node};

/// IUGG mean Earth radius in km.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Haversine distance in km between two (lat, lon) points in decimal degrees,
/// scaled by `circuity`.
pub fn haversine_km(a: (f64, f64), b: (f64, f64), circuity: f64) -> Result<f64> {
    let (lat1, lon1) = a;
    let (lat2, lon2) = b;
    if ![lat1, lon1, lat2, lon2].iter().all(|v| v.is_finite()) {
        let bad = if lat1.is_finite() && lon1.is_finite() { b } else { a };
        return Err(Error::NonFiniteCoordinate {
            lat: bad.0,
            lon: bad.1,
        });
    }
    // Absolute differences keep the result bitwise symmetric in (a, b).
    let dphi = (lat2 - lat1).abs().to_radians();
    let dlambda = (lon2 - lon1).abs().to_radians();
    let s1 = (dphi / 2.0).sin();
    let s2 = (dlambda / 2.0).sin();
    let h = s1 * s1 + lat1.to_radians().cos() * lat2.to_radians().cos() * s2 * s2;
    let central = 2.0 * h.clamp(0.0, 1.0).sqrt().asin();
    Ok(EARTH_RADIUS_KM * central * circuity)
}

/// The five transport legs in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leg {
    SrcCf,
    CfRtf,
    RtfCpf,
    CpfDpf,
    DpfSink,
}

impl Leg {
    pub const ALL: [Leg; 5] = [Leg::SrcCf, Leg::CfRtf, Leg::RtfCpf, Leg::CpfDpf, Leg::DpfSink];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Facility echelon the leg delivers into, if any.
    pub fn destination(self) -> Option<Echelon> {
        match self {
            Leg::SrcCf => Some(Echelon::Cf),
            Leg::CfRtf => Some(Echelon::Rtf),
            Leg::RtfCpf => Some(Echelon::Cpf),
            Leg::CpfDpf => Some(Echelon::Dpf),
            Leg::DpfSink => None,
        }
    }

    /// Facility echelon the leg leaves from, if any.
    pub fn origin(self) -> Option<Echelon> {
        match self {
            Leg::SrcCf => None,
            Leg::CfRtf => Some(Echelon::Cf),
            Leg::RtfCpf => Some(Echelon::Rtf),
            Leg::CpfDpf => Some(Echelon::Cpf),
            Leg::DpfSink => Some(Echelon::Dpf),
        }
    }

    /// Leg delivering into the given echelon.
    pub fn into_echelon(e: Echelon) -> Leg {
        Leg::ALL[e.index()]
    }

    /// Leg leaving the given echelon.
    pub fn out_of(e: Echelon) -> Leg {
        Leg::ALL[e.index() + 1]
    }

    pub fn tag(self) -> &'static str {
        match self {
            Leg::SrcCf => "src-cf",
            Leg::CfRtf => "cf-rtf",
            Leg::RtfCpf => "rtf-cpf",
            Leg::CpfDpf => "cpf-dpf",
            Leg::DpfSink => "dpf-sink",
        }
    }

    pub fn origins(self, inst: &Instance) -> Vec<&Node> {
        match self.origin() {
            None => inst.sources.iter().map(|s| &s.node).collect(),
            Some(e) => inst.echelon(e).candidate_sites.iter().collect(),
        }
    }

    pub fn destinations(self, inst: &Instance) -> Vec<&Node> {
        match self.destination() {
            None => inst.sinks.iter().map(|s| &s.node).collect(),
            Some(e) => inst.echelon(e).candidate_sites.iter().collect(),
        }
    }
}

/// Dense row-major origin × destination distances in km.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn between(origins: &[&Node], destinations: &[&Node], circuity: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(origins.len() * destinations.len());
        for o in origins {
            for d in destinations {
                values.push(haversine_km((o.lat, o.lon), (d.lat, d.lon), circuity)?);
            }
        }
        Ok(Self {
            rows: origins.iter().map(|n| n.id.clone()).collect(),
            cols: destinations.iter().map(|n| n.id.clone()).collect(),
            values,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn get(&self, origin: usize, destination: usize) -> f64 {
        self.values[origin * self.cols.len() + destination]
    }

    /// CSV audit dump: origin id, destination id, km at 3 decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["origin", "destination", "km"])?;
        for (i, o) in self.rows.iter().enumerate() {
            for (j, d) in self.cols.iter().enumerate() {
                w.write_record([o.as_str(), d.as_str(), &format!("{:.3}", self.get(i, j))])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// The five leg matrices, indexed by [`Leg::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct LegMatrices(pub [DistanceMatrix; 5]);

impl LegMatrices {
    pub fn leg(&self, leg: Leg) -> &DistanceMatrix {
        &self.0[leg.index()]
    }
}

pub fn build_leg_matrices(inst: &Instance) -> Result<LegMatrices> {
    let m = |leg: Leg| {
        DistanceMatrix::between(&leg.origins(inst), &leg.destinations(inst), inst.circuity_factor)
    };
    Ok(LegMatrices([
        m(Leg::SrcCf)?,
        m(Leg::CfRtf)?,
        m(Leg::RtfCpf)?,
        m(Leg::CpfDpf)?,
        m(Leg::DpfSink)?,
    ]))
}
