"""Command-line overrides for the dataclass configs used by the experiment scripts."""

import argparse
import dataclasses
import json
import pathlib
import typing


def parse_config(cls, argv=None, description=None):
    """Build ``cls`` from its defaults, overridden by ``--field value`` flags."""
    hints = typing.get_type_hints(cls)
    p = argparse.ArgumentParser(description=description or cls.__doc__)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        tp = hints[f.name]
        if tp is bool:
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=f.default)
        elif typing.get_origin(tp) is tuple:
            (elem, *_) = typing.get_args(tp)
            p.add_argument(flag, nargs="+", type=elem, default=f.default)
        else:
            p.add_argument(flag, type=tp, default=f.default)
    ns = p.parse_args(argv)
    return cls(**{f.name: (tuple(v) if isinstance(v, list) else v)
                  for f in dataclasses.fields(cls) for v in [getattr(ns, f.name)]})


def write_json(path, payload):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")
