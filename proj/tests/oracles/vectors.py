#!/usr/bin/env python3
#   Copyright 2026 The hldpos-lab Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#
# Independent reference for the frozen vectors in the C++ tests.
import hashlib, struct

P = 0xffffffff00000001000000000000000000000000ffffffffffffffffffffffff
A = P - 3
N = 0xffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551
G = (0x6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296,
     0x4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5)

def add(p, q):
    if p is None: return q
    if q is None: return p
    if p[0] == q[0] and (p[1] + q[1]) % P == 0: return None
    if p == q: l = (3 * p[0] * p[0] + A) * pow(2 * p[1], -1, P) % P
    else: l = (q[1] - p[1]) * pow(q[0] - p[0], -1, P) % P
    x = (l * l - p[0] - q[0]) % P
    return (x, (l * (p[0] - x) - p[1]) % P)

def mul(k, p):
    r = None
    while k:
        if k & 1: r = add(r, p)
        p = add(p, p); k >>= 1
    return r

H = lambda b: hashlib.sha256(b).digest()
i = lambda b: int.from_bytes(b, 'big')
enc = lambda pt: b'\x04' + pt[0].to_bytes(32, 'big') + pt[1].to_bytes(32, 'big')
u32 = lambda v: struct.pack('>I', v)
u64 = lambda v: struct.pack('>Q', v)

def keygen(seed):
    c = 0
    while True:
        v = i(H(b'hldpos-vrf-keygen' + seed + u32(c))) % N
        if v: return v, mul(v, G)
        c += 1

def evaluate(v, pk, x):
    rec = u32(256) + v.to_bytes(32, 'big')
    r = i(H(rec + x + b'nonce')) % N
    R = mul(r, G)
    c = H(enc(R) + enc(pk) + x)
    s = (r + i(c) * v) % N
    return H(s.to_bytes(32, 'big') + x), c + s.to_bytes(32, 'big') + enc(R)

v, pk = keygen(b'alice')
out, proof = evaluate(v, pk, b'epoch-1')
print('sk', hex(v)); print('pk.x', '%064x' % pk[0]); print('pk.y', '%064x' % pk[1])
print('output', out.hex()); print('proof', proof.hex())
print('unit', (i(out[:8]) >> 11) / 2**53)

def txid(s, r, a, rd, n): return H(b'tx' + u32(s) + u32(r) + u64(a) + u64(rd) + u64(n))
def header(h, prev, prod, root): return H(b'block' + u64(h) + prev + u32(prod) + root)
t = txid(1, 2, 5, 3, 9)
print('txid', t.hex())
genesis = header(0, bytes(32), 0xffffffff, bytes(32))
print('genesis', genesis.hex())
root1 = H(t + t)
print('root1', root1.hex())
print('block1', header(1, genesis, 7, root1).hex())
u = (i(H(out)[:8]) >> 11) / 2**53
print('group_unit', repr(u), 'bucket10', min(int(u * 10) + 1, 10))
print('hash_to_unit_empty', repr((i(H(b'')[:8]) >> 11) / 2**53))
