import pytest

from covpovm import group as grp
from covpovm import rep as rp

from support import embed_block, make_wh_rep


@pytest.fixture(scope="session")
def quaternion():
    return grp.quaternion_group()


@pytest.fixture(scope="session")
def dihedral():
    return grp.dihedral8_group()


@pytest.fixture(scope="session")
def quat3_rep(quaternion):
    return rp.rep_from_matrices(
        quaternion, [embed_block(m) for m in grp.QUATERNION_MATRICES]
    )


@pytest.fixture(scope="session")
def dihedral3_rep(dihedral):
    return rp.rep_from_matrices(
        dihedral, [embed_block(m) for m in grp.DIHEDRAL8_MATRICES]
    )


@pytest.fixture(scope="session")
def wh_rep_d2():
    return make_wh_rep(2)


@pytest.fixture(scope="session")
def wh_rep_d3():
    return make_wh_rep(3)
