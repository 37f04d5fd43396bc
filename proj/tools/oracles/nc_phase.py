#!/usr/bin/env python3
"""Phase polynomial of alpha^n(u^rho) for a 4x4 unipotent S, expanded letter by letter with sympy."""
import sympy as sp
a,b=sp.symbols('a b')
d=4
S=sp.Matrix([[1,-2,1,2],[0,1,-2,-1],[0,0,1,2],[0,0,0,1]])
T=sp.Matrix([[0,0,0,-a],[0,0,-a,a],[0,a,0,b],[a,-a,-b,0]])
assert all(sp.simplify(e)==0 for e in (S.T*T*S-T))
def beta(x,y): return sum(x[j]*y[k]*T[j,k] for k in range(d) for j in range(k+1,d))
def mul(p,x,q,y): return (p+q+beta(x,y), [x[i]+y[i] for i in range(d)])
# oracle by expanding alpha(u^x) letter by letter as products of generator images
def alpha(p,x):
    ph,ex=p,[0]*d
    for j in range(d):
        col=[S[i,j] for i in range(d)]
        step=-1 if x[j]<0 else 1
        if step<0:
            inv=( beta(col,col), [-c for c in col])  # (u^c)^-1 = e(beta(c,c)) u^-c
        for _ in range(abs(x[j])):
            if step>0: ph,ex=mul(ph,ex,0,col)
            else: ph,ex=mul(ph,ex,inv[0],inv[1])
    return sp.expand(ph),ex
rho=[0,1,-2,1]
p,x=0,rho; vals=[]
for n in range(8):
    vals.append(p); p,x=alpha(p,x)
c=[];v=list(vals)
for j in range(len(v)):
    c.append(sp.expand(v[0])); v=[sp.expand(v[i+1]-v[i]) for i in range(len(v)-1)]
print(c)
