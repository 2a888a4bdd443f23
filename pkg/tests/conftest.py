"""Shared fixtures: reference matrices and cached operational-matrix bundles."""

import numpy as np
import pytest

from wavefocp.basis import WaveletParams
from wavefocp.opmats import build_operational_matrices

# Published reference matrices for k=2, M=4 (8x8 basis). The Gram matrices
# are block-diagonal; only the two 4x4 blocks are listed.

D09_BLOCK1 = np.array([
    [0.925875, 0.844033, 0.7394, 0.662063],
    [0.844033, 0.992009, 0.969161, 0.922368],
    [0.7394, 0.969161, 1.00639, 0.995918],
    [0.662063, 0.922368, 0.995918, 1.01268],
])

D09_BLOCK2 = np.array([
    [1.07413, 0.941951, 0.815443, 0.72606],
    [0.941951, 1.09403, 1.06284, 1.00824],
    [0.815443, 1.06284, 1.10008, 1.08633],
    [0.72606, 1.00824, 1.08633, 1.10297],
])

D1_BLOCK = np.array([
    [1.0, 0.866025, 0.745356, 0.661438],
    [0.866025, 1.0, 0.968246, 0.916515],
    [0.745356, 0.968246, 1.0, 0.986013],
    [0.661438, 0.916515, 0.986013, 1.0],
])

# Reference order-0.9 integration matrices for the fractional basis
# (mu = 0.9) and the plain basis. Entry (3, 6) of the fractional matrix is
# flagged as a likely typo in the source and is checked loosely.

P09_FRACTIONAL = np.array([
    [0.000376754, 0.297652, 0.00288863, -0.00145978,
     0.514575, -0.0901146, 0.0680759, -0.0250085],
    [-0.0000339738, 0.000166643, 0.220955, 0.000139662,
     0.488206, -0.112764, 0.0940739, -0.0357926],
    [4.32235e-6, -0.000021994, 0.000036755, 0.168787,
     0.438811, -0.118706, 0.104177, -0.0403629],
    [-0.00681141, 0.0723549, -0.24335, 0.313394,
     0.400278, -0.120455, 0.1092047, -0.0428148],
    [0.0, 0.0, 0.0, 0.0, 0.00523984, 0.389532, -0.0681946, 0.025082],
    [0.0, 0.0, 0.0, 0.0, -0.000555412, 0.0104491, 0.244884, -0.00747049],
    [0.0, 0.0, 0.0, 0.0, 0.000177077, -0.00257342, 0.015652, 0.172614],
    [0.0, 0.0, 0.0, 0.0, -0.00604376, 0.0694403, -0.242547, 0.327425],
])

P09_ERRATUM_ENTRY = (3, 6)

P09_PLAIN = np.array([
    [0.0048894, 0.381098, -0.080508, 0.0277208,
     0.552325, -0.091867, 0.070449, -0.0261748],
    [-0.000615, 0.011247, 0.235221, -0.0140564,
     0.500057, -0.113807, 0.0971996, -0.0375117],
    [0.0003976, -0.005255, 0.0257836, 0.152538,
     0.442586, -0.119822, 0.107959, -0.0424765],
    [-0.005181, 0.0603413, -0.214021, 0.297002,
     0.400694, -0.121823, 0.113584, -0.045259],
    [0.0, 0.0, 0.0, 0.0, 0.0048894, 0.381098, -0.080508, 0.0277208],
    [0.0, 0.0, 0.0, 0.0, -0.000615, 0.011247, 0.235221, -0.0140564],
    [0.0, 0.0, 0.0, 0.0, 0.0003976, -0.0052557, 0.0257836, 0.152538],
    [0.0, 0.0, 0.0, 0.0, -0.005181, 0.0603413, -0.214021, 0.297002],
])

# Published cost values for the first reference problem at k=2, M=4,
# per fractional order: (plain-basis J, fractional-basis J).

COST_TABLE = {
    1.0: (0.192909, 0.192909),
    0.99: (0.191531, 0.191541),
    0.95: (0.186105, 0.186167),
    0.85: (0.173184, 0.173487),
    0.75: (0.161202, 0.162042),
    0.5: (0.135314, 0.141662),
}

# Published pointwise absolute errors for the first reference problem at
# mu=1, k=2, M=4, zeta = 0.1 .. 0.9.

POINTWISE_ERR_X = [5.35737e-5, 4.43828e-6, 1.20259e-5, 9.07815e-5,
                   4.26262e-6, 9.69844e-5, 7.68442e-5, 9.69206e-5,
                   1.51849e-4]
POINTWISE_ERR_U = [1.48744e-4, 1.07836e-4, 1.4746e-4, 1.59711e-4,
                   2.10423e-4, 2.23537e-4, 2.63508e-4, 2.9988e-4,
                   3.37278e-4]


@pytest.fixture(scope="session")
def params_frac09():
    return WaveletParams(k=2, M=4, mu=0.9)


@pytest.fixture(scope="session")
def params_plain():
    return WaveletParams(k=2, M=4, mu=1.0)


@pytest.fixture(scope="session")
def mats_frac09(params_frac09):
    return build_operational_matrices(params_frac09)


@pytest.fixture(scope="session")
def mats_plain(params_plain):
    return build_operational_matrices(params_plain)
