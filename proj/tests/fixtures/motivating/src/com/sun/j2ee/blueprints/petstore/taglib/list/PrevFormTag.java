package com.sun.j2ee.blueprints.petstore.taglib.list;

import java.io.IOException;
import javax.servlet.jsp.JspException;
import javax.servlet.jsp.JspTagException;
import javax.servlet.jsp.JspWriter;
import javax.servlet.jsp.tagext.TagSupport;

public class PrevFormTag extends TagSupport {

    private String action;

    public void setAction(String action) {
        this.action = action;
    }

    public int doStartTag() throws JspTagException {
        try {
            JspWriter out = pageContext.getOut();
            out.print("<form name=\"prevForm\" action=\"cart\" method=\"post\">");
            out.print("<input type=\"hidden\" name=\"page\" value=\"prev\">");
        } catch (IOException e) {
            throw new JspTagException("PrevFormTag: " + e.getMessage());
        }
        return EVAL_BODY_INCLUDE;
    }

    public int doEndTag() throws JspTagException {
        try {
            pageContext.getOut().print("</form>");
        } catch (IOException e) {
            throw new JspTagException("PrevFormTag: " + e.getMessage());
        }
        return EVAL_PAGE;
    }
}
