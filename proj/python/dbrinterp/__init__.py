# Copyright 2026 The dbrinterp Authors
# SPDX-License-Identifier: Apache-2.0

"""Norm-constrained interpolation in de Branges-Rovnyak and Hardy spaces."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
