"""
RPCASuite: A Zincwarecode package.

License
-------
This program and the accompanying materials are made available under the terms
of the Eclipse Public License v2.0 which accompanies this distribution, and is
available at https://www.eclipse.org/legal/epl-v20.html

SPDX-License-Identifier: EPL-2.0

Copyright Contributors to the Zincwarecode Project.

Summary
-------
Column types of the run database.
"""
import json

from sqlalchemy.ext.mutable import Mutable
from sqlalchemy.types import VARCHAR, TypeDecorator


class JSONEncodedDict(TypeDecorator):
    """Dictionary stored as JSON text with sorted keys.

    Sorted keys make the stored text canonical, so two equal dictionaries compare
    equal inside SQL queries.
    """

    impl = VARCHAR
    cache_ok = True

    def process_bind_param(self, value: dict, dialect):
        if value is not None:
            value = json.dumps(value, sort_keys=True)
        return value

    def process_result_value(self, value, dialect) -> dict:
        if value is not None:
            value = json.loads(value)
        return value


class MutableDict(Mutable, dict):
    """Dictionary that flags its row as dirty when an item changes."""

    @classmethod
    def coerce(cls, key, value):
        if isinstance(value, MutableDict):
            return value
        if isinstance(value, dict):
            return MutableDict(value)
        # raises ValueError
        return Mutable.coerce(key, value)

    def __setitem__(self, key, value):
        dict.__setitem__(self, key, value)
        self.changed()

    def __delitem__(self, key):
        dict.__delitem__(self, key)
        self.changed()
