from ._bankucb import *
