//! Shared fixtures for unit tests.

use crate::code::LinearNetworkCode;
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::network::{Network, NetworkBuilder};

/// Two sinks behind four relays; every sink has cut capacity 3.
pub(crate) fn relay4() -> Network {
    relay4_over(5)
}

pub(crate) fn relay4_over(q: u64) -> Network {
    let mut b = NetworkBuilder::new(Field::new(q).unwrap());
    b.source("s").unwrap();
    b.sink("t1").sink("t2");
    for (id, t, h) in [
        ("e1", "s", "t1"),
        ("e2", "s", "v1"),
        ("e3", "s", "v2"),
        ("e4", "s", "t2"),
        ("e5", "v1", "t1"),
        ("e6", "v1", "v3"),
        ("e7", "v2", "v3"),
        ("e8", "v2", "t2"),
        ("e9", "v3", "v4"),
        ("e10", "v4", "t1"),
        ("e11", "v4", "t2"),
    ] {
        b.edge(id, t, h).unwrap();
    }
    b.build().unwrap()
}

/// A decodable 3-dimensional code on [`relay4`].
pub(crate) fn relay4_base3(net: &Network) -> LinearNetworkCode {
    let f = net.field();
    let node = |n: &str| net.node_id(n).unwrap();
    let m = |rows: &[Vec<u64>]| Matrix::from_rows(f, rows).unwrap();
    LinearNetworkCode::new(
        net,
        3,
        [
            (
                node("s"),
                m(&[vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 2, 2]]),
            ),
            (node("v1"), m(&[vec![1, 1]])),
            (node("v2"), m(&[vec![1, 1]])),
            (node("v3"), m(&[vec![4], vec![1]])),
            (node("v4"), m(&[vec![1, 1]])),
        ],
    )
    .unwrap()
}
