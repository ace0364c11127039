# -*- coding: utf-8 -*-
# Python bindings for lab.proto.
# source: lab.proto
# Protobuf Python Version: 4.25.3
"""Protocol buffer bindings for lab.proto, assembled from a FileDescriptorProto."""
from google.protobuf import descriptor as _descriptor
from google.protobuf import descriptor_pb2 as _descriptor_pb2
from google.protobuf import descriptor_pool as _descriptor_pool
from google.protobuf import symbol_database as _symbol_database
from google.protobuf.internal import builder as _builder

_sym_db = _symbol_database.Default()

_F = _descriptor_pb2.FieldDescriptorProto
_INT32 = _F.TYPE_INT32
_UINT32 = _F.TYPE_UINT32
_STRING = _F.TYPE_STRING
_BOOL = _F.TYPE_BOOL
_DOUBLE = _F.TYPE_DOUBLE
_MESSAGE = _F.TYPE_MESSAGE

# Mirrors lab.proto; field numbers follow declaration order.
_MESSAGES = [
    ("FieldDescription", [
        ("schema_version", _INT32, False, None),
        ("m", _INT32, False, None),
        ("modulus_bits", _UINT32, False, None),
        ("generator_bits", _UINT32, False, None),
    ]),
    ("PlaceRecord", [
        ("index", _INT32, False, None),
        ("coords_hex", _STRING, True, None),
    ]),
    ("CoordinateFibers", [
        ("coordinate", _INT32, False, None),
        ("values", _INT32, False, None),
        ("min_places", _INT32, False, None),
        ("max_places", _INT32, False, None),
    ]),
    ("PlaceList", [
        ("schema_version", _INT32, False, None),
        ("tower", _STRING, False, None),
        ("depth", _INT32, False, None),
        ("places", _MESSAGE, True, ".lrclab.PlaceRecord"),
        ("fibers", _MESSAGE, True, ".lrclab.CoordinateFibers"),
    ]),
    ("GeneratorMatrix", [
        ("schema_version", _INT32, False, None),
        ("n", _INT32, False, None),
        ("k_nominal", _INT32, False, None),
        ("m", _INT32, False, None),
        ("modulus", _UINT32, False, None),
        ("symbols", _UINT32, True, None),
    ]),
    ("DistanceReport", [
        ("d_lower", _INT32, False, None),
        ("d_lower_source", _STRING, False, None),
        ("d_upper", _INT32, False, None),
        ("d_upper_source", _STRING, False, None),
        ("exact", _BOOL, False, None),
        ("notes", _STRING, True, None),
    ]),
    ("CodeParameters", [
        ("schema_version", _INT32, False, None),
        ("preset", _STRING, False, None),
        ("n", _INT32, False, None),
        ("k", _INT32, False, None),
        ("k_nominal", _INT32, False, None),
        ("r", _INT32, False, None),
        ("distance", _MESSAGE, False, ".lrclab.DistanceReport"),
        ("sampled_floor", _INT32, False, None),
        ("d", _INT32, False, None),
    ]),
    ("PropositionResult", [
        ("proposition_id", _STRING, False, None),
        ("q", _INT32, False, None),
        ("status", _STRING, False, None),
        ("passed", _BOOL, False, None),
        ("measured_json", _STRING, False, None),
        ("witness_json", _STRING, False, None),
    ]),
    ("VerificationReport", [
        ("schema_version", _INT32, False, None),
        ("q", _INT32, False, None),
        ("results", _MESSAGE, True, ".lrclab.PropositionResult"),
    ]),
    ("RepairDemo", [
        ("schema_version", _INT32, False, None),
        ("preset", _STRING, False, None),
        ("position", _INT32, False, None),
        ("erased_hex", _STRING, False, None),
        ("repaired_hex", _STRING, False, None),
        ("fiber", _INT32, True, None),
        ("ok", _BOOL, False, None),
    ]),
    ("RatePointRecord", [
        ("label", _STRING, False, None),
        ("n", _INT32, False, None),
        ("k", _INT32, False, None),
        ("d", _INT32, False, None),
        ("r", _INT32, False, None),
        ("delta_num", _INT32, False, None),
        ("delta_den", _INT32, False, None),
        ("rate_num", _INT32, False, None),
        ("rate_den", _INT32, False, None),
        ("btv_ok", _BOOL, False, None),
        ("paper_ok", _BOOL, False, None),
        ("gv_ok", _BOOL, False, None),
        ("exact", _BOOL, False, None),
        ("d_upper", _INT32, False, None),
    ]),
    ("AsymptoticPoint", [
        ("variant", _STRING, False, None),
        ("delta", _DOUBLE, False, None),
        ("rate", _DOUBLE, False, None),
    ]),
    ("ScatterTable", [
        ("schema_version", _INT32, False, None),
        ("q", _INT32, False, None),
        ("points", _MESSAGE, True, ".lrclab.RatePointRecord"),
        ("asymptotic", _MESSAGE, True, ".lrclab.AsymptoticPoint"),
    ]),
    ("BoundsReport", [
        ("schema_version", _INT32, False, None),
        ("r", _INT32, False, None),
        ("q", _INT32, False, None),
        ("delta_num", _INT32, False, None),
        ("delta_den", _INT32, False, None),
        ("btv", _DOUBLE, False, None),
        ("improved", _DOUBLE, False, None),
        ("gv", _DOUBLE, False, None),
        ("gv_minimiser", _DOUBLE, False, None),
    ]),
]


def _json_name(name):
    head, *rest = name.split("_")
    return head + "".join(part.capitalize() for part in rest)


def _file_proto():
    file_proto = _descriptor_pb2.FileDescriptorProto(name="lab.proto", package="lrclab", syntax="proto3")
    for message_name, fields in _MESSAGES:
        message = file_proto.message_type.add(name=message_name)
        for number, (field_name, field_type, repeated, type_name) in enumerate(fields, start=1):
            field = message.field.add(
                name=field_name,
                number=number,
                type=field_type,
                label=_F.LABEL_REPEATED if repeated else _F.LABEL_OPTIONAL,
                json_name=_json_name(field_name),
            )
            if type_name:
                field.type_name = type_name
    return file_proto


DESCRIPTOR = _descriptor_pool.Default().AddSerializedFile(_file_proto().SerializeToString())

_globals = globals()
_builder.BuildMessageAndEnumDescriptors(DESCRIPTOR, _globals)
_builder.BuildTopDescriptorsAndMessages(DESCRIPTOR, 'lab_pb2', _globals)
if _descriptor._USE_C_DESCRIPTORS == False:
  DESCRIPTOR._options = None
