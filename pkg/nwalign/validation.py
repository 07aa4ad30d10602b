__all__ = ['schema']

import os
import yaml
from cerberus import Validator

MODULE_DIR = os.path.dirname(os.path.abspath(__file__))

# extension for the cross-field scoring check
class NWValidator(Validator):
    def _validate_scoring_order(self, scoring_order, field, value):
        """ Test that a match outscores a mismatch and that gaps are penalized.

        The rule's arguments are validated against this schema:
        {'type': 'boolean'}
        """
        if not scoring_order or not isinstance(value, dict):
            return
        match, mismatch, gap = value.get('match'), value.get('mismatch'), value.get('gap')
        if isinstance(match, int) and isinstance(mismatch, int) and not match > mismatch:
            self._error(field, f"match ({match}) must be greater than mismatch ({mismatch})")
        if isinstance(gap, int) and not gap < 0:
            self._error(field, f"gap ({gap}) must be negative")

with open(os.path.join(MODULE_DIR, 'input-schema.yaml')) as f:
    schema = NWValidator(yaml.load(f, Loader=yaml.FullLoader))
