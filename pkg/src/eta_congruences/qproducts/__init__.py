from eta_congruences.qproducts.tables import *
from eta_congruences.qproducts.eta import *
from eta_congruences.qproducts.theta import *
