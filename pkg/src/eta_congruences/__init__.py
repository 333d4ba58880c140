__version__ = "0.1.0"

__description__ = "Eta quotients with identically vanishing coefficients modulo 4, 9 and 25."

from eta_congruences.report import *
from eta_congruences.series import *
from eta_congruences.qproducts import *
from eta_congruences.identities import *
from eta_congruences.oracles import *
from eta_congruences.search import *
from eta_congruences.combinatorics import *
from eta_congruences.examples import *


import eta_congruences
__all__ = [] \
+ eta_congruences.report.__all__ \
+ eta_congruences.series.__all__ \
+ eta_congruences.qproducts.tables.__all__ \
+ eta_congruences.qproducts.eta.__all__ \
+ eta_congruences.qproducts.theta.__all__ \
+ eta_congruences.identities.__all__ \
+ eta_congruences.oracles.__all__ \
+ eta_congruences.search.__all__ \
+ eta_congruences.combinatorics.__all__ \
+ eta_congruences.examples.__all__
