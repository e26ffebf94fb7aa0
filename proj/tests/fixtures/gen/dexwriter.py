# Copyright (C) 2026 The Androscan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Minimal DEX (version 035) writer used to produce test fixtures.

Supports classes with direct/virtual methods whose bodies are built from a
handful of opcodes (const-string, new-instance, invoke-*, move-result-object,
check-cast, return-void).  Output is a structurally valid dex including a
map_list, adler32 checksum and SHA-1 signature.
"""

import hashlib
import struct
import zlib


def uleb128(value):
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def mutf8(text):
    """Encodes text as modified UTF-8 (NUL as C0 80, supplementary chars as surrogate pairs)."""
    out = bytearray()
    utf16_len = 0
    for ch in text:
        cp = ord(ch)
        units = [cp]
        if cp >= 0x10000:
            cp -= 0x10000
            units = [0xD800 | (cp >> 10), 0xDC00 | (cp & 0x3FF)]
        for u in units:
            utf16_len += 1
            if 0 < u < 0x80:
                out.append(u)
            elif u < 0x800:
                out.append(0xC0 | (u >> 6))
                out.append(0x80 | (u & 0x3F))
            else:
                out.append(0xE0 | (u >> 12))
                out.append(0x80 | ((u >> 6) & 0x3F))
                out.append(0x80 | (u & 0x3F))
    return utf16_len, bytes(out)


def utf16_key(text):
    return text.encode("utf-16-be", "surrogatepass")


def shorty_char(descriptor):
    return "L" if descriptor[0] in "L[" else descriptor[0]


class Method:
    def __init__(self, name, ret="V", params=(), code=None, static=False, direct=True):
        self.name = name
        self.ret = ret
        self.params = tuple(params)
        # code: list of tuples, see DexBuilder._assemble
        self.code = code if code is not None else [("return-void",)]
        self.static = static
        self.direct = direct


class ClassDef:
    def __init__(self, descriptor, superclass="Ljava/lang/Object;", methods=(), source_file=None):
        self.descriptor = descriptor
        self.superclass = superclass
        self.methods = list(methods)
        self.source_file = source_file


class DexBuilder:
    def __init__(self):
        self.classes = []
        self.extra_strings = []
        self.method_refs = []  # (class, name, ret, params)

    def add_class(self, cls):
        self.classes.append(cls)

    def add_string(self, s):
        self.extra_strings.append(s)

    def ref_method(self, cls, name, ret="V", params=()):
        self.method_refs.append((cls, name, ret, tuple(params)))

    # -- pooling ---------------------------------------------------------

    def _collect(self):
        strings = set(self.extra_strings)
        types = set()
        protos = set()
        methods = set()

        def add_proto(ret, params):
            shorty = shorty_char(ret) + "".join(shorty_char(p) for p in params)
            strings.add(shorty)
            types.add(ret)
            types.update(params)
            protos.add((shorty, ret, params))

        for cls, name, ret, params in self.method_refs:
            types.add(cls)
            strings.add(name)
            add_proto(ret, params)
            methods.add((cls, name, ret, params))
        for c in self.classes:
            types.add(c.descriptor)
            if c.superclass:
                types.add(c.superclass)
            if c.source_file:
                strings.add(c.source_file)
            for m in c.methods:
                strings.add(m.name)
                add_proto(m.ret, m.params)
                methods.add((c.descriptor, m.name, m.ret, m.params))
                for ins in m.code:
                    op = ins[0]
                    if op == "const-string":
                        strings.add(ins[2])
                    elif op in ("new-instance", "check-cast"):
                        types.add(ins[2])
                    elif op.startswith("invoke-"):
                        cls, name, ret, params = ins[1]
                        types.add(cls)
                        strings.add(name)
                        add_proto(ret, tuple(params))
                        methods.add((cls, name, ret, tuple(params)))
        strings.update(types)
        self.strings = sorted(strings, key=utf16_key)
        self.sidx = {s: i for i, s in enumerate(self.strings)}
        self.types = sorted(types, key=lambda t: self.sidx[t])
        self.tidx = {t: i for i, t in enumerate(self.types)}

        def proto_key(p):
            shorty, ret, params = p
            return (self.tidx[ret], [self.tidx[x] for x in params])

        self.protos = sorted(protos, key=proto_key)
        self.pidx = {(p[1], p[2]): i for i, p in enumerate(self.protos)}

        def method_key(m):
            cls, name, ret, params = m
            return (self.tidx[cls], self.sidx[name], self.pidx[(ret, params)])

        self.methods = sorted(methods, key=method_key)
        self.midx = {m: i for i, m in enumerate(self.methods)}

    # -- code ------------------------------------------------------------

    def _assemble(self, method):
        units = []
        for ins in method.code:
            op = ins[0]
            if op == "return-void":
                units.append(0x000E)
            elif op == "const-string":
                reg, s = ins[1], ins[2]
                units += [0x1A | (reg << 8), self.sidx[s]]
            elif op == "new-instance":
                reg, t = ins[1], ins[2]
                units += [0x22 | (reg << 8), self.tidx[t]]
            elif op == "check-cast":
                reg, t = ins[1], ins[2]
                units += [0x1F | (reg << 8), self.tidx[t]]
            elif op == "move-result-object":
                units.append(0x0C | (ins[1] << 8))
            elif op.startswith("invoke-"):
                opcode = {"invoke-virtual": 0x6E, "invoke-super": 0x6F, "invoke-direct": 0x70,
                          "invoke-static": 0x71, "invoke-interface": 0x72}[op]
                cls, name, ret, params = ins[1]
                regs = list(ins[2])
                while len(regs) < 5:
                    regs.append(0)
                count = len(ins[2])
                units.append(opcode | (((count << 4) | regs[4]) << 8))
                units.append(self.midx[(cls, name, ret, tuple(params))])
                units.append(regs[0] | (regs[1] << 4) | (regs[2] << 8) | (regs[3] << 12))
            elif op == "nop":
                units.append(0x0000)
            else:
                raise ValueError(op)
        return units

    # -- layout ----------------------------------------------------------

    def build(self):
        self._collect()
        n_str, n_type, n_proto = len(self.strings), len(self.types), len(self.protos)
        n_meth, n_class = len(self.methods), len(self.classes)
        off = 0x70
        string_ids_off = off
        off += 4 * n_str
        type_ids_off = off
        off += 4 * n_type
        proto_ids_off = off
        off += 12 * n_proto
        method_ids_off = off
        off += 8 * n_meth
        class_defs_off = off
        off += 32 * n_class
        data_off = off

        data = bytearray()

        def here():
            return data_off + len(data)

        def align4():
            while here() % 4:
                data.append(0)

        # code items
        code_items = []
        code_offs = {}
        align4()
        code_section_off = here()
        for c in self.classes:
            for m in c.methods:
                align4()
                units = self._assemble(m)
                ins = len(m.params) + (0 if m.static else 1)
                regs = max(ins + 4, 6)
                code_offs[(c.descriptor, m.name, m.ret, m.params)] = here()
                data.extend(struct.pack("<HHHHII", regs, ins, 5, 0, 0, len(units)))
                for u in units:
                    data.extend(struct.pack("<H", u))
                code_items.append(m)
        n_code = len(code_items)

        # type lists
        align4()
        type_list_off = here()
        type_list_offs = {}
        for shorty, ret, params in self.protos:
            if params and params not in type_list_offs:
                align4()
                type_list_offs[params] = here()
                data.extend(struct.pack("<I", len(params)))
                for p in params:
                    data.extend(struct.pack("<H", self.tidx[p]))
        n_type_list = len(type_list_offs)

        # string data
        string_data_off = here()
        string_offs = []
        for s in self.strings:
            string_offs.append(here())
            n16, payload = mutf8(s)
            data.extend(uleb128(n16) + payload + b"\x00")

        # class data
        class_data_off = here()
        class_data_offs = []
        for c in self.classes:
            direct = sorted([m for m in c.methods if m.direct],
                            key=lambda m: self.midx[(c.descriptor, m.name, m.ret, m.params)])
            virtual = sorted([m for m in c.methods if not m.direct],
                             key=lambda m: self.midx[(c.descriptor, m.name, m.ret, m.params)])
            class_data_offs.append(here())
            data.extend(uleb128(0) + uleb128(0) + uleb128(len(direct)) + uleb128(len(virtual)))
            for group in (direct, virtual):
                prev = 0
                for m in group:
                    key = (c.descriptor, m.name, m.ret, m.params)
                    idx = self.midx[key]
                    flags = 0x0001 | (0x0008 if m.static else 0)
                    if m.name == "<init>":
                        flags |= 0x10000
                    data.extend(uleb128(idx - prev) + uleb128(flags) + uleb128(code_offs[key]))
                    prev = idx

        # map list
        align4()
        map_off = here()
        entries = [
            (0x0000, 1, 0),
            (0x0001, n_str, string_ids_off),
            (0x0002, n_type, type_ids_off),
            (0x0003, n_proto, proto_ids_off),
            (0x0005, n_meth, method_ids_off),
            (0x0006, n_class, class_defs_off),
            (0x2001, n_code, code_section_off),
            (0x1001, n_type_list, type_list_off),
            (0x2002, n_str, string_data_off),
            (0x2000, n_class, class_data_off),
            (0x1000, 1, map_off),
        ]
        entries = [e for e in entries if e[1] > 0]
        data.extend(struct.pack("<I", len(entries)))
        for t, size, o in entries:
            data.extend(struct.pack("<HHII", t, 0, size, o))

        # tables
        tables = bytearray()
        for o in string_offs:
            tables.extend(struct.pack("<I", o))
        for t in self.types:
            tables.extend(struct.pack("<I", self.sidx[t]))
        for shorty, ret, params in self.protos:
            tables.extend(struct.pack("<III", self.sidx[shorty], self.tidx[ret],
                                      type_list_offs.get(params, 0)))
        for cls, name, ret, params in self.methods:
            tables.extend(struct.pack("<HHI", self.tidx[cls], self.pidx[(ret, params)], self.sidx[name]))
        for i, c in enumerate(self.classes):
            tables.extend(struct.pack("<IIIIIIII", self.tidx[c.descriptor], 0x0001,
                                      self.tidx[c.superclass] if c.superclass else 0xFFFFFFFF,
                                      0, self.sidx[c.source_file] if c.source_file else 0xFFFFFFFF,
                                      0, class_data_offs[i], 0))
        assert 0x70 + len(tables) == data_off

        file_size = data_off + len(data)
        header = bytearray(b"dex\n035\x00")
        header += b"\x00" * 4 + b"\x00" * 20
        header += struct.pack("<III", file_size, 0x70, 0x12345678)
        header += struct.pack("<II", 0, 0)  # link
        header += struct.pack("<I", map_off)
        header += struct.pack("<II", n_str, string_ids_off if n_str else 0)
        header += struct.pack("<II", n_type, type_ids_off if n_type else 0)
        header += struct.pack("<II", n_proto, proto_ids_off if n_proto else 0)
        header += struct.pack("<II", 0, 0)  # fields
        header += struct.pack("<II", n_meth, method_ids_off if n_meth else 0)
        header += struct.pack("<II", n_class, class_defs_off if n_class else 0)
        header += struct.pack("<II", len(data), data_off)
        assert len(header) == 0x70
        blob = bytearray(header + tables + data)
        signature = hashlib.sha1(bytes(blob[32:])).digest()
        blob[12:32] = signature
        checksum = zlib.adler32(bytes(blob[12:])) & 0xFFFFFFFF
        blob[8:12] = struct.pack("<I", checksum)
        return bytes(blob)
