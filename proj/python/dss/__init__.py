# SPDX-License-Identifier: Apache-2.0
#
# dss: dataset storage standard tooling for 6G testbeds
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Read-only access to DSS datasets: open, plot_cr, plot_tf, plot_rir, validate."""

import json as _json

from ._core import BoundDataset, DssError, layout_version, open, plot_cr, plot_rir, plot_tf
from ._core import _run_cli

__all__ = ["BoundDataset", "DssError", "open", "plot_cr", "plot_tf", "plot_rir", "validate", "layout_version"]


def validate(*paths, registry=None):
    """Validates description files or directories; returns the JSON report as a dict."""
    args = ["validate", *[str(p) for p in paths], "--format", "json"]
    if registry is not None:
        args += ["--registry", str(registry)]
    rc, out, err = _run_cli(args)
    if rc not in (0, 1) or not out:
        raise DssError(err.strip() or f"validate failed with exit code {rc}")
    return _json.loads(out)
