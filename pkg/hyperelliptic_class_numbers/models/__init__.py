"""Data models for hyperelliptic curve statistics."""

from .base import *
from .curves import *
from .reports import *
